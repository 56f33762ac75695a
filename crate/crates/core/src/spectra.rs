//! Character sums and spectra of the Cayley graph `X(D_n, S)`.
//!
//! `D_n` has `m` linear characters (`m = 2` for odd `n`, `4` for even) and
//! `⌊(n−1)/2⌋` degree-2 characters `χ_h` with `χ_h(a^k) = 2cos(2πkh/n)` and
//! `χ_h(b·a^k) = 0`. The spectrum of `X(D_n, S)` consists of
//!
//! * `λ_i = Σ_{s∈S} ψ_i(s)` with multiplicity 1 per linear character, and
//! * `μ_{h1,2} = (χ_h(S₁) ± √Δ_h)/2` with multiplicity 2 each, where
//!   `Δ_h = 2(χ_h(S₁²) + χ_h(S₂²)) − χ_h(S₁)²`.
//!
//! Two evaluation paths are provided. The float path computes every `χ_h`
//! as a cosine sum and works for any connection set, but never decides
//! anything — it exists for diagnostics and cross-validation. The exact path
//! is pure integer arithmetic: when `S₁` is a union of atoms and `S₂²` lies
//! in the integral cone, each `χ_h` collapses to a linear combination of
//! Ramanujan sums (`Σ_{gcd(l,n)=d} e^{2πihl/n} = c(h, n/d)`, so
//! `χ_h(Σ_d m_d·[a^d]) = 2·Σ_d m_d·c(h, n/d)`), the identity
//! `χ_h(S₁)² = 2χ_h(S₁²)` reduces the discriminant to `Δ_h = 2χ_h(S₂²)`,
//! and the square root is an integer square root. The exact path succeeds
//! exactly on the integral graphs.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::group::{AtomDecomposition, ConnectionSet, RotationMultiset};
use crate::numtheory::{perfect_square_root, ramanujan_sum};

/// Absolute tolerance used when merging float eigenvalues and for the
/// advisory "is this an integer" checks. The float path never decides
/// integrality, so this is a reporting knob, not a correctness knob.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Why the exact path refused a connection set. The three obstructions
/// mirror the exact integrality criterion; at least one of them holds
/// if and only if the graph is not integral, so this type doubles as the
/// witness carried by a `not_integral` verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntegralityObstruction {
    /// `S₁` is not a union of atoms of `Z_n`.
    S1NotInBooleanAlgebra,
    /// The multiset `S₂²` is not constant on some atom.
    S2SquareNotInCone,
    /// `Δ_h = 2χ_h(S₂²)` is not a perfect square at this `h`.
    NonSquareDelta { h: u64, delta: i64 },
}

impl fmt::Display for IntegralityObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralityObstruction::S1NotInBooleanAlgebra => {
                write!(f, "S1 is not a union of atoms of Z_n")
            }
            IntegralityObstruction::S2SquareNotInCone => {
                write!(f, "S2^2 is not constant on the atoms of Z_n")
            }
            IntegralityObstruction::NonSquareDelta { h, delta } => {
                write!(f, "2chi_h(S2^2) = {delta} at h = {h} is not a perfect square")
            }
        }
    }
}

/// Errors from spectrum computation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    /// Character-based spectra need `n ≥ 3` (no degree-2 characters below).
    #[error("modulus n = {0} is out of range: need n ≥ 3 (D_1 and D_2 are degenerate)")]
    BadModulus(u64),
    /// Exact mode was requested for a graph whose spectrum is irrational.
    #[error("exact spectrum unavailable: {0}")]
    ExactPathUnavailable(IntegralityObstruction),
    /// A mathematically guaranteed identity failed; indicates a bug, never
    /// bad user input.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

/// An eigenvalue or character value: exact integer on the exact path,
/// floating-point real on the float path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Int(i64),
    Real(f64),
}

impl Scalar {
    fn real(x: f64) -> Self {
        // normalize -0.0 so reports are canonical
        Scalar::Real(if x == 0.0 { 0.0 } else { x })
    }

    /// The value as an `f64` (lossless for the integers arising here).
    pub fn as_f64(self) -> f64 {
        match self {
            Scalar::Int(v) => v as f64,
            Scalar::Real(x) => x,
        }
    }

    /// True for exact integer values.
    pub fn is_exact(self) -> bool {
        matches!(self, Scalar::Int(_))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Real(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    /// Serialized as a decimal string to avoid JSON float precision loss.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One eigenvalue with its merged multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenvalueEntry {
    pub value: Scalar,
    pub multiplicity: u64,
}

/// Character data for one index `h`: `χ_h(S₁)`, the discriminant `Δ_h`,
/// and the two eigenvalues `μ_{h1} ≥ μ_{h2}` it produces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacterRow {
    pub h: u64,
    pub chi_s1: Scalar,
    pub delta: Scalar,
    pub mu1: Scalar,
    pub mu2: Scalar,
}

/// The full spectrum of `X(D_n, S)`.
///
/// Every constructed report satisfies, by assertion:
/// `Σ multiplicity = 2n`, `Σ value·multiplicity = 0` (trace), and
/// `Σ value²·multiplicity = 2n·|S|` (edge-count identity) — exactly on the
/// exact path, within float tolerance otherwise.
///
/// Eigenvalues are merged across coinciding character indices (each
/// quadratic root carries multiplicity 2, and multiplicities add up when
/// values collide) and sorted descending; `per_h` retains the raw unmerged
/// data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n: u64,
    pub s1: Vec<u64>,
    pub s2: Vec<u64>,
    /// True when produced by the exact integer path.
    pub exact: bool,
    /// Number of linear characters: 2 for odd `n`, 4 for even.
    pub m: u64,
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub per_h: Vec<CharacterRow>,
}

impl SpectrumReport {
    /// All `2n` eigenvalues expanded by multiplicity, descending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for e in &self.eigenvalues {
            out.extend(std::iter::repeat(e.value.as_f64()).take(e.multiplicity as usize));
        }
        out
    }

    /// Compact one-line form `"4^1 0^3 -2^2"` (value^multiplicity, descending).
    pub fn compact(&self) -> String {
        self.eigenvalues
            .iter()
            .map(|e| format!("{}^{}", e.value, e.multiplicity))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Evaluation mode for [`spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Integer arithmetic throughout; fails unless the graph is integral.
    Exact,
    /// Cosine sums; works for every connection set.
    Float,
}

/// Exact `χ_h` of a multiset given by its atom decomposition:
/// `2·Σ_d m_d·c(h, n/d)`.
pub fn chi_h_exact(dec: &AtomDecomposition, h: u64) -> i64 {
    2 * dec
        .coeffs()
        .iter()
        .map(|(&d, &m)| m as i64 * ramanujan_sum(h, dec.n() / d))
        .sum::<i64>()
}

/// Float `χ_h` of an arbitrary multiset: `Σ_u mult(u)·2cos(2πhu/n)`.
pub fn chi_h_float(m: &RotationMultiset, h: u64) -> f64 {
    let n = m.n();
    (0..n)
        .map(|u| {
            // reduce h·u mod n before forming the angle: keeps the argument
            // small so the cosine stays accurate for large h·u
            let arg = TAU * ((h % n) * u % n) as f64 / n as f64;
            m.mult(u) as f64 * 2.0 * arg.cos()
        })
        .sum()
}

/// Eigenvalues `λ_i = Σ_{s∈S} ψ_i(s)` of the linear characters, in character
/// order: `[|S₁|+|S₂|, |S₁|−|S₂|]`, extended for even `n` by the signed sums
/// `σ₁ ± σ₂` where `σ_j = Σ_{u∈S_j} (−1)^u`.
pub fn linear_eigenvalues(s: &ConnectionSet) -> Vec<i64> {
    let k1 = s.s1().len() as i64;
    let k2 = s.s2().len() as i64;
    let mut out = vec![k1 + k2, k1 - k2];
    if s.n() % 2 == 0 {
        let sign_sum =
            |set: &std::collections::BTreeSet<u64>| set.iter().map(|&u| 1 - 2 * (u as i64 % 2)).sum::<i64>();
        let t1 = sign_sum(s.s1());
        let t2 = sign_sum(s.s2());
        out.push(t1 + t2);
        out.push(t1 - t2);
    }
    out
}

/// Number of degree-2 character indices: `h` runs over `1..=⌊(n−1)/2⌋`.
fn h_range(n: u64) -> u64 {
    (n - 1) / 2
}

/// Computes the spectrum of `X(D_n, S)` in the requested mode.
///
/// Exact mode requires `S₁ ∈ B(⟨a⟩)`, `S₂² ∈ C(⟨a⟩)`, and every
/// `Δ_h = 2χ_h(S₂²)` a perfect square — i.e. exactly the integral graphs —
/// and otherwise reports the obstruction via
/// [`SpectraError::ExactPathUnavailable`].
pub fn spectrum(s: &ConnectionSet, mode: Mode) -> Result<SpectrumReport, SpectraError> {
    let n = s.n();
    if n < 3 {
        return Err(SpectraError::BadModulus(n));
    }
    let hs = h_range(n);
    let m = if n % 2 == 0 { 4 } else { 2 };
    // character count accounting: m linear + ⌊(n−1)/2⌋ degree-2 characters
    // contributing 4 eigenvalues each must exhaust all 2n
    if 4 * hs + m != 2 * n {
        return Err(SpectraError::Internal(format!(
            "character count 4·{hs} + {m} ≠ 2·{n}"
        )));
    }

    let linear = linear_eigenvalues(s);
    let mut per_h = Vec::with_capacity(hs as usize);

    let report = match mode {
        Mode::Exact => {
            let d1 = s
                .s1_boolean_decomposition()
                .ok_or(SpectraError::ExactPathUnavailable(IntegralityObstruction::S1NotInBooleanAlgebra))?;
            let c2 = s
                .s2_squared()
                .cone_decomposition()
                .ok_or(SpectraError::ExactPathUnavailable(IntegralityObstruction::S2SquareNotInCone))?;
            let mut merged: BTreeMap<i64, u64> = BTreeMap::new();
            for &l in &linear {
                *merged.entry(l).or_insert(0) += 1;
            }
            for h in 1..=hs {
                let chi1 = chi_h_exact(&d1, h);
                let delta = 2 * chi_h_exact(&c2, h);
                if delta < 0 {
                    return Err(SpectraError::Internal(format!(
                        "negative discriminant {delta} at h = {h}"
                    )));
                }
                let root = perfect_square_root(delta).ok_or(SpectraError::ExactPathUnavailable(
                    IntegralityObstruction::NonSquareDelta { h, delta },
                ))?;
                // μ1 + μ2 = χ and μ1 − μ2 = √Δ are both integers, so χ ± √Δ
                // is always even here
                if (chi1 + root) % 2 != 0 {
                    return Err(SpectraError::Internal(format!(
                        "χ_h(S₁) = {chi1} and √Δ_h = {root} have different parity at h = {h}"
                    )));
                }
                let mu1 = (chi1 + root) / 2;
                let mu2 = (chi1 - root) / 2;
                per_h.push(CharacterRow {
                    h,
                    chi_s1: Scalar::Int(chi1),
                    delta: Scalar::Int(delta),
                    mu1: Scalar::Int(mu1),
                    mu2: Scalar::Int(mu2),
                });
                *merged.entry(mu1).or_insert(0) += 2;
                *merged.entry(mu2).or_insert(0) += 2;
            }
            let eigenvalues: Vec<EigenvalueEntry> = merged
                .into_iter()
                .rev()
                .map(|(value, multiplicity)| EigenvalueEntry {
                    value: Scalar::Int(value),
                    multiplicity,
                })
                .collect();
            SpectrumReport {
                n,
                s1: s.s1().iter().copied().collect(),
                s2: s.s2().iter().copied().collect(),
                exact: true,
                m,
                eigenvalues,
                per_h,
            }
        }
        Mode::Float => {
            let ind1 = RotationMultiset::from_set(s.s1(), n);
            let sq1 = s.s1_squared();
            let sq2 = s.s2_squared();
            let mut values: Vec<f64> = linear.iter().map(|&l| l as f64).collect();
            for h in 1..=hs {
                let chi1 = chi_h_float(&ind1, h);
                let mut delta = 2.0 * (chi_h_float(&sq1, h) + chi_h_float(&sq2, h)) - chi1 * chi1;
                // Δ_h is a symmetric-matrix discriminant, hence ≥ 0; clamp
                // the rounding dust, reject anything genuinely negative.
                // The clamp must also catch *positive* dust: at a double root
                // the true Δ_h is 0, and √(noise) would split the pair by
                // ~1e−8. The floor scales with the summed cosine magnitudes
                // and sits far above their accumulated rounding error, yet
                // far below any nonzero discriminant integer multiplicities
                // of this mass can produce.
                let floor = 1e-10 * (1.0 + 8.0 * (sq1.mass() + sq2.mass()) as f64);
                if delta < 0.0 {
                    if delta < -1e-6 {
                        return Err(SpectraError::Internal(format!(
                            "negative discriminant {delta} at h = {h}"
                        )));
                    }
                    delta = 0.0;
                } else if delta < floor {
                    delta = 0.0;
                }
                let root = delta.sqrt();
                let mu1 = (chi1 + root) / 2.0;
                let mu2 = (chi1 - root) / 2.0;
                per_h.push(CharacterRow {
                    h,
                    chi_s1: Scalar::real(chi1),
                    delta: Scalar::real(delta),
                    mu1: Scalar::real(mu1),
                    mu2: Scalar::real(mu2),
                });
                values.extend([mu1, mu1, mu2, mu2]);
            }
            values.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
            let mut eigenvalues: Vec<EigenvalueEntry> = Vec::new();
            for v in values {
                match eigenvalues.last_mut() {
                    Some(e) if (e.value.as_f64() - v).abs() <= FLOAT_TOLERANCE => {
                        e.multiplicity += 1
                    }
                    _ => eigenvalues.push(EigenvalueEntry {
                        value: Scalar::real(v),
                        multiplicity: 1,
                    }),
                }
            }
            SpectrumReport {
                n,
                s1: s.s1().iter().copied().collect(),
                s2: s.s2().iter().copied().collect(),
                exact: false,
                m,
                eigenvalues,
                per_h,
            }
        }
    };
    check_report_invariants(&report, s).map(|()| report)
}

/// Trace, energy, and multiplicity-count identities every report must obey.
fn check_report_invariants(r: &SpectrumReport, s: &ConnectionSet) -> Result<(), SpectraError> {
    let total: u64 = r.eigenvalues.iter().map(|e| e.multiplicity).sum();
    if total != 2 * r.n {
        return Err(SpectraError::Internal(format!(
            "multiplicities sum to {total}, expected {}",
            2 * r.n
        )));
    }
    let trace: f64 = r.eigenvalues.iter().map(|e| e.value.as_f64() * e.multiplicity as f64).sum();
    let energy: f64 =
        r.eigenvalues.iter().map(|e| e.value.as_f64().powi(2) * e.multiplicity as f64).sum();
    let expected_energy = (2 * r.n * s.size()) as f64;
    let tol = if r.exact { 0.0 } else { 1e-6 * (1.0 + expected_energy) };
    if trace.abs() > tol {
        return Err(SpectraError::Internal(format!("trace {trace} ≠ 0")));
    }
    if (energy - expected_energy).abs() > tol {
        return Err(SpectraError::Internal(format!(
            "energy {energy} ≠ 2n·|S| = {expected_energy}"
        )));
    }
    Ok(())
}
