//! Command-line front end: spectra, integrality checks, atom tables,
//! Ramanujan sums, the brute-force oracle, exhaustive censuses, and the
//! integral family over prime moduli.
//!
//! Exit codes: 0 success (and "integral" for `check`), 1 not integral
//! (`check` only), 2 usage or validation error, 3 internal invariant
//! violation (e.g. an exact/oracle disagreement during a census).

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use dihedral_cayley::census::{run_census, CensusError, CensusOptions, CensusRow};
use dihedral_cayley::group::{atom_members, AtomDecomposition, ConnectionSet, GroupError};
use dihedral_cayley::integrality::{
    check_integral, check_numeric, classify_two_integral, dp_integral_sets, IntegralityError,
    Verdict,
};
use dihedral_cayley::numtheory::{divisors, ramanujan_sum};
use dihedral_cayley::oracle;
use dihedral_cayley::spectra::{spectrum, Mode, SpectraError};

/// Exact spectra and integrality of Cayley graphs over dihedral groups.
#[derive(Parser)]
#[command(name = "dncayley", version, about)]
struct Cli {
    /// Print runtime errors as machine-readable JSON on standard error.
    #[arg(long, global = true)]
    json_errors: bool,
    #[command(subcommand)]
    command: Command,
}

/// How a connection set is supplied to a subcommand.
#[derive(Args)]
struct SetInput {
    /// Inline connection set, e.g. "n=7; s1=1,6; s2=1,2,4" (empty lists
    /// allowed: "s1=").
    #[arg(long, conflicts_with = "file")]
    set: Option<String>,
    /// Path to a JSON connection set: {"n":7,"s1":[1,6],"s2":[1,2,4]}.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl SetInput {
    fn load(&self) -> Result<ConnectionSet, Failure> {
        match (&self.set, &self.file) {
            (Some(text), None) => Ok(ConnectionSet::parse_compact(text)?),
            (None, Some(path)) => {
                let data = fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str(&data)
                    .map_err(|e| Failure::Usage(format!("invalid set in {}: {e}", path.display())))
            }
            _ => Err(Failure::Usage(
                "provide a connection set via --set or --file".to_string(),
            )),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleFormat {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Integer eigenvalues via character sums; refuses irrational spectra.
    Exact,
    /// Cosine evaluation with eigenvalue merging at a fixed tolerance.
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RowFormat {
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the spectrum of X(D_n, S).
    Spectrum {
        #[command(flatten)]
        input: SetInput,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decide integrality exactly; exit 0 when integral, 1 when not.
    Check {
        #[command(flatten)]
        input: SetInput,
        /// Also evaluate the advisory floating-point criterion.
        #[arg(long)]
        numeric: bool,
        /// Nearness tolerance for the advisory criterion.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Also classify S₂² when it spans exactly two atoms (odd n only).
        #[arg(long)]
        classify: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the gcd-atoms of Z_n, or a set's atom decompositions.
    Atoms {
        /// List every atom of Z_n.
        #[arg(long, conflicts_with_all = ["set", "file"])]
        n: Option<u64>,
        #[command(flatten)]
        input: SetInput,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate the Ramanujan sum c(s, n).
    Ramanujan {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Brute-force verification: characteristic polynomial, integer-root
    /// certificate, numeric eigenvalues, DOT export.
    Oracle {
        #[command(flatten)]
        input: SetInput,
        #[arg(long, value_enum, default_value = "text")]
        format: OracleFormat,
    },
    /// Exhaustive audited census over D_n (exact checker vs. oracle).
    Census {
        #[arg(long)]
        n: u64,
        /// Skip sets with S₂ = ∅.
        #[arg(long)]
        nonempty_s2: bool,
        /// Keep only sets whose graph is connected.
        #[arg(long)]
        connected_only: bool,
        /// Keep only sets whose S₁ is a union of atoms.
        #[arg(long)]
        s1_in_boolean_only: bool,
        /// Keep one S₂ per rotation orbit.
        #[arg(long)]
        up_to_rotation: bool,
        /// Largest n allowed for an exhaustive run.
        #[arg(long, default_value_t = 12)]
        cap: u64,
        /// Write one row per set to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        row_format: RowFormat,
        /// Write the summary JSON to this file as well as stdout.
        #[arg(long)]
        summary_out: Option<PathBuf>,
        /// Worker threads (default: $DNCAYLEY_JOBS, else all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// List every integral connection set over D_p for an odd prime p.
    DpList {
        /// The odd prime modulus.
        p: u64,
        /// Append the two disconnected S₂ = ∅ sets.
        #[arg(long)]
        include_empty_s2: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// A runtime failure with its process exit code.
enum Failure {
    /// Bad input or a validation error: exit 2.
    Usage(String),
    /// A broken mathematical invariant: exit 3.
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<SpectraError> for Failure {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<IntegralityError> for Failure {
    fn from(e: IntegralityError) -> Self {
        match e {
            IntegralityError::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Disagreement { .. } | CensusError::Internal(_) => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    // Restore the default SIGPIPE disposition so `dncayley ... | head`
    // terminates quietly instead of panicking mid-write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            if cli.json_errors {
                let payload = serde_json::json!({
                    "error": { "code": failure.code(), "message": failure.message() }
                });
                eprintln!("{payload}");
            } else {
                eprintln!("error: {}", failure.message());
            }
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Spectrum { input, mode, format } => cmd_spectrum(&input, mode, format),
        Command::Check {
            input,
            numeric,
            tolerance,
            classify,
            format,
        } => cmd_check(&input, numeric, tolerance, classify, format),
        Command::Atoms { n, input, format } => cmd_atoms(n, &input, format),
        Command::Ramanujan { s, n, format } => cmd_ramanujan(s, n, format),
        Command::Oracle { input, format } => cmd_oracle(&input, format),
        Command::Census {
            n,
            nonempty_s2,
            connected_only,
            s1_in_boolean_only,
            up_to_rotation,
            cap,
            out,
            row_format,
            summary_out,
            jobs,
        } => {
            let mut options = CensusOptions::default();
            options.filters.nonempty_s2 = nonempty_s2;
            options.filters.connected_only = connected_only;
            options.filters.s1_in_boolean_only = s1_in_boolean_only;
            options.up_to_rotation = up_to_rotation;
            options.cap = cap;
            cmd_census(n, options, out.as_deref(), row_format, summary_out.as_deref(), jobs)
        }
        Command::DpList {
            p,
            include_empty_s2,
            format,
        } => cmd_dp_list(p, include_empty_s2, format),
    }
}

fn cmd_spectrum(input: &SetInput, mode: ModeArg, format: Format) -> Result<u8, Failure> {
    let s = input.load()?;
    let mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float,
    };
    let report = spectrum(&s, mode)?;
    match format {
        Format::Json => {
            let payload = serde_json::json!({ "set": s, "spectrum": report });
            println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
        }
        Format::Text => {
            println!("{s}");
            println!("mode: {}", if report.exact { "exact" } else { "float" });
            println!("spectrum: {}", report.compact());
        }
    }
    Ok(0)
}

fn cmd_check(
    input: &SetInput,
    numeric: bool,
    tolerance: f64,
    classify: bool,
    format: Format,
) -> Result<u8, Failure> {
    let s = input.load()?;
    let report = check_integral(&s)?;
    let numeric_report = if numeric {
        Some(check_numeric(&s, tolerance)?)
    } else {
        None
    };
    let classification = if classify {
        Some(classify_two_integral(&s)?)
    } else {
        None
    };

    match format {
        Format::Json => {
            let mut payload = serde_json::json!({ "set": s, "report": report });
            if let Some(n) = &numeric_report {
                payload["numeric"] = serde_json::json!(n);
            }
            if let Some(c) = &classification {
                payload["classification"] = serde_json::json!(c);
            }
            println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
        }
        Format::Text => {
            println!("{s}");
            println!("verdict: {}", report.verdict);
            if let Some(w) = &report.witness {
                println!("witness: {w}");
            }
            println!("connected: {}", report.connected);
            println!("boolean pair sufficient: {}", report.boolean_pair_sufficient);
            if let Some(k) = report.k_integrality {
                println!("k-integrality of S2^2: {k}");
            }
            if report.degenerate_empty {
                println!("note: empty connection set (2n isolated vertices)");
            }
            if let Some(n) = &numeric_report {
                println!(
                    "numeric advisory (tolerance {}): {}",
                    n.tolerance,
                    if n.integral_advisory { "integral" } else { "not integral" }
                );
                for row in &n.rows {
                    println!(
                        "  h={}: chi(S1)={:.6}, chi(S1^2)+chi(S2^2)={:.6}, delta={:.6}{}",
                        row.h,
                        row.chi_s1,
                        row.chi_sq_sum,
                        row.delta,
                        if row.delta_near_square { "" } else { "  <- not a square" }
                    );
                }
            }
            if let Some(c) = &classification {
                println!("two-atom classification: {:?}", c.form);
            }
        }
    }
    Ok(if report.verdict == Verdict::Integral { 0 } else { 1 })
}

/// Renders a decomposition as atom unions (`∪` when every coefficient is 1,
/// weighted `+` otherwise).
fn decomposition_text(dec: &AtomDecomposition) -> String {
    if dec.coeffs().is_empty() {
        return "0 (empty)".to_string();
    }
    let weighted = dec.coeffs().values().any(|&m| m != 1);
    let mut parts = Vec::new();
    for (&d, &m) in dec.coeffs().iter().rev() {
        if weighted {
            parts.push(format!("{m}*[a^{d}]"));
        } else {
            parts.push(format!("[a^{d}]"));
        }
    }
    parts.join(if weighted { " + " } else { " u " })
}

fn cmd_atoms(n: Option<u64>, input: &SetInput, format: Format) -> Result<u8, Failure> {
    if let Some(n) = n {
        if n == 0 {
            return Err(Failure::Usage("modulus n = 0 has no atoms".to_string()));
        }
        let atoms: Vec<(u64, Vec<u64>)> =
            divisors(n).into_iter().map(|d| (d, atom_members(d, n))).collect();
        match format {
            Format::Json => {
                let payload = serde_json::json!({
                    "n": n,
                    "atoms": atoms
                        .iter()
                        .map(|(d, members)| serde_json::json!({ "divisor": d, "members": members }))
                        .collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
            }
            Format::Text => {
                println!("atoms of Z_{n}");
                for (d, members) in &atoms {
                    let mut line = String::new();
                    write!(line, "[a^{d}]: ").expect("string write");
                    line.push_str(
                        &members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
                    );
                    println!("{line}");
                }
            }
        }
        return Ok(0);
    }

    let s = input.load()?;
    let s1_atoms = s.s1_boolean_decomposition();
    let s2sq_cone = s.s2_squared().cone_decomposition();
    match format {
        Format::Json => {
            let payload = serde_json::json!({
                "set": s,
                "s1_atoms": s1_atoms,
                "s2sq_cone": s2sq_cone,
            });
            println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
        }
        Format::Text => {
            println!("{s}");
            match &s1_atoms {
                Some(d) => println!("S1 = {}", decomposition_text(d)),
                None => println!("S1 is not a union of atoms"),
            }
            match &s2sq_cone {
                Some(d) => println!("S2^2 = {}", decomposition_text(d)),
                None => println!("S2^2 is not constant on the atoms"),
            }
        }
    }
    Ok(0)
}

fn cmd_ramanujan(s: u64, n: u64, format: Format) -> Result<u8, Failure> {
    if n == 0 {
        return Err(Failure::Usage("c(s, n) requires n ≥ 1".to_string()));
    }
    let value = ramanujan_sum(s, n);
    match format {
        Format::Json => {
            println!("{}", serde_json::json!({ "s": s, "n": n, "value": value }));
        }
        Format::Text => println!("{value}"),
    }
    Ok(0)
}

fn cmd_oracle(input: &SetInput, format: OracleFormat) -> Result<u8, Failure> {
    let s = input.load()?;
    if format == OracleFormat::Dot {
        print!("{}", oracle::to_dot(&s));
        return Ok(0);
    }
    let adjacency = oracle::build_adjacency(&s);
    let poly = oracle::char_poly(&adjacency);
    let certificate = oracle::is_integral(&s);
    let eigenvalues = oracle::numeric_eigenvalues(&adjacency);
    match format {
        OracleFormat::Json => {
            let payload = serde_json::json!({
                "set": s,
                "char_poly": poly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "integral": certificate.integral,
                "roots": certificate
                    .roots
                    .iter()
                    .map(|&(value, multiplicity)| {
                        serde_json::json!({ "value": value, "multiplicity": multiplicity })
                    })
                    .collect::<Vec<_>>(),
                "surviving_factor": certificate
                    .surviving_factor
                    .as_ref()
                    .map(|f| f.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
                "numeric_eigenvalues": eigenvalues,
            });
            println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
        }
        OracleFormat::Text => {
            println!("{s}");
            println!("characteristic polynomial (descending coefficients): {poly}");
            println!("integral: {}", certificate.integral);
            let roots = certificate
                .roots
                .iter()
                .map(|(r, m)| format!("{r}^{m}"))
                .collect::<Vec<_>>()
                .join(" ");
            println!("integer roots: {}", if roots.is_empty() { "none" } else { &roots });
            match &certificate.surviving_factor {
                Some(f) => println!("surviving non-integer factor: {f}"),
                None => println!("surviving non-integer factor: none"),
            }
            println!(
                "numeric eigenvalues: {}",
                eigenvalues.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ")
            );
        }
        OracleFormat::Dot => unreachable!("handled above"),
    }
    Ok(0)
}

fn cmd_census(
    n: u64,
    options: CensusOptions,
    out: Option<&std::path::Path>,
    row_format: RowFormat,
    summary_out: Option<&std::path::Path>,
    jobs: Option<usize>,
) -> Result<u8, Failure> {
    let jobs = jobs.or_else(|| {
        std::env::var("DNCAYLEY_JOBS").ok().and_then(|v| v.parse().ok())
    });
    let report = match jobs {
        Some(j) if j > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Failure::Internal(format!("cannot build thread pool: {e}")))?
            .install(|| run_census(n, &options)),
        _ => run_census(n, &options),
    }?;

    if let Some(path) = out {
        let mut text = String::new();
        match row_format {
            RowFormat::Csv => {
                text.push_str(CensusRow::csv_header());
                text.push('\n');
                for row in &report.rows {
                    text.push_str(&row.csv_record());
                    text.push('\n');
                }
            }
            RowFormat::Jsonl => {
                for row in &report.rows {
                    text.push_str(&serde_json::to_string(row).expect("serializable"));
                    text.push('\n');
                }
            }
        }
        fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let summary = serde_json::to_string_pretty(&report.summary).expect("serializable");
    if let Some(path) = summary_out {
        fs::write(path, &summary)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    println!("{summary}");
    Ok(0)
}

fn cmd_dp_list(p: u64, include_empty_s2: bool, format: Format) -> Result<u8, Failure> {
    let sets = dp_integral_sets(p, include_empty_s2)?;
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&sets).expect("serializable"));
        }
        Format::Text => {
            for s in &sets {
                println!("{s}");
            }
        }
    }
    Ok(0)
}
