//! Deciding whether a dihedral Cayley graph has an all-integer spectrum.
//!
//! Everything here runs in exact integer arithmetic. The decision procedure
//! [`check_integral`] walks a three-step criterion and stops at the first
//! failure, so a `not_integral` verdict always carries a concrete witness:
//!
//! 1. `S₁` must be a union of atoms of `Z_n` (otherwise some `χ_h(S₁)` is
//!    irrational);
//! 2. the difference multiset `S₂²` must be constant on every atom
//!    (otherwise some `χ_h(S₂²)` is irrational);
//! 3. every discriminant `Δ_h = 2χ_h(S₂²)` for `h = 1, …, ⌊(n−1)/2⌋` must be
//!    a perfect square (otherwise the eigenvalue pair `(χ_h(S₁) ± √Δ_h)/2`
//!    is irrational).
//!
//! The module also provides:
//!
//! * [`check_numeric`] — an advisory floating-point rendition of the same
//!   criterion, useful for cross-checking the exact path;
//! * [`boolean_pair_sufficient`] — the easy sufficient condition "both `S₁`
//!   and the reflection indices of `S₂` are unions of atoms";
//! * [`classify_two_integral`] — for odd `n`, recognizes the connection sets
//!   whose `S₂²` spans exactly two atoms and matches them against the only
//!   shapes that can be integral: full or once-punctured cosets of a prime-
//!   order rotation subgroup;
//! * [`dp_integral_sets`] — the complete list of integral connection sets
//!   over `D_p` for an odd prime `p`.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

use crate::group::{boolean_decomposition, AtomDecomposition, ConnectionSet, RotationMultiset};
use crate::numtheory::{is_perfect_square, is_prime};
use crate::spectra::{chi_h_exact, chi_h_float, IntegralityObstruction};

/// Errors from the integrality routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntegralityError {
    /// The modulus is too small for a meaningful Cayley graph.
    #[error("modulus n = {0} is out of range: need n ≥ 3 (D_1 and D_2 are degenerate)")]
    BadModulus(u64),
    /// The two-atom classification is only defined over odd moduli.
    #[error("the coset classification requires odd n, got n = {0}")]
    EvenModulus(u64),
    /// `S₂²` does not span exactly one non-identity atom.
    #[error("S2^2 is not supported on exactly two atoms: {details}")]
    NotTwoAtoms { details: String },
    /// `dp_integral_sets` only enumerates over odd primes.
    #[error("p = {0} is not an odd prime")]
    NotOddPrime(u64),
    /// A mathematically guaranteed identity failed; indicates a bug, never
    /// bad user input.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

/// The outcome of the exact integrality decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Integral,
    NotIntegral,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Integral => write!(f, "integral"),
            Verdict::NotIntegral => write!(f, "not_integral"),
        }
    }
}

/// Full result of the exact integrality decision for one connection set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralityReport {
    /// Modulus of the dihedral group.
    pub n: u64,
    /// Sorted rotation exponents of `S₁`.
    pub s1: Vec<u64>,
    /// Sorted reflection indices of `S₂`.
    pub s2: Vec<u64>,
    pub verdict: Verdict,
    /// Present exactly when the verdict is `not_integral`: the first
    /// criterion step that failed, with enough data to re-check it by hand.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<IntegralityObstruction>,
    /// Atom decomposition of `S₁`, when `S₁` is a union of atoms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s1_atoms: Option<AtomDecomposition>,
    /// Atom decomposition of the multiset `S₂²`, when it is atom-constant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s2sq_cone: Option<AtomDecomposition>,
    /// True when both `S₁` and the reflection indices of `S₂` are unions of
    /// atoms. This alone forces integrality; the converse fails.
    pub boolean_pair_sufficient: bool,
    /// Number of atoms appearing in `S₂²` with nonzero coefficient, when
    /// `S₂²` is atom-constant. Counts the identity atom.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_integrality: Option<u64>,
    /// True when `S` generates the whole group, i.e. the graph is connected.
    pub connected: bool,
    /// True for the empty connection set, whose graph is 2n isolated
    /// vertices (integral, but degenerate).
    pub degenerate_empty: bool,
}

/// Decides exactly whether the Cayley graph of `s` has an all-integer
/// spectrum.
///
/// Never returns a false verdict on irrational input: irrationality is
/// detected structurally (steps 1–2) or via a non-square discriminant
/// (step 3), all in integer arithmetic.
pub fn check_integral(s: &ConnectionSet) -> Result<IntegralityReport, IntegralityError> {
    let n = s.n();
    if n < 3 {
        return Err(IntegralityError::BadModulus(n));
    }
    let sufficient = boolean_pair_sufficient(s);
    let s1_atoms = s.s1_boolean_decomposition();
    let s2sq_cone = s.s2_squared().cone_decomposition();
    let k_integrality = s2sq_cone.as_ref().map(|d| d.num_atoms() as u64);

    let witness = if s1_atoms.is_none() {
        Some(IntegralityObstruction::S1NotInBooleanAlgebra)
    } else if s2sq_cone.is_none() {
        Some(IntegralityObstruction::S2SquareNotInCone)
    } else {
        let cone = s2sq_cone.as_ref().unwrap();
        let mut found = None;
        for h in 1..=(n - 1) / 2 {
            let delta = 2 * chi_h_exact(cone, h);
            if delta < 0 {
                // Δ_h is a sum of |χ_h(ba^x) + χ_h(ba^y)|²-style squares, so
                // a negative value can only come from a bug upstream.
                return Err(IntegralityError::Internal(format!(
                    "negative discriminant {delta} at h = {h} for {s}"
                )));
            }
            if !is_perfect_square(delta) {
                found = Some(IntegralityObstruction::NonSquareDelta { h, delta });
                break;
            }
        }
        found
    };

    if sufficient && witness.is_some() {
        return Err(IntegralityError::Internal(format!(
            "boolean-pair sufficiency contradicts witness {} for {s}",
            witness.unwrap()
        )));
    }

    Ok(IntegralityReport {
        n,
        s1: s.s1().iter().copied().collect(),
        s2: s.s2().iter().copied().collect(),
        verdict: if witness.is_none() {
            Verdict::Integral
        } else {
            Verdict::NotIntegral
        },
        witness,
        s1_atoms,
        s2sq_cone,
        boolean_pair_sufficient: sufficient,
        k_integrality,
        connected: s.is_generating(),
        degenerate_empty: s.is_empty(),
    })
}

/// One row of the advisory floating-point integrality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericRow {
    pub h: u64,
    /// `χ_h(S₁)` evaluated with cosines.
    pub chi_s1: f64,
    /// `χ_h(S₁²) + χ_h(S₂²)` evaluated with cosines.
    pub chi_sq_sum: f64,
    /// Discriminant `Δ_h = 2(χ_h(S₁²) + χ_h(S₂²)) − χ_h(S₁)²`.
    pub delta: f64,
    pub chi_s1_near_integer: bool,
    pub chi_sq_sum_near_integer: bool,
    /// True when `delta` is within tolerance of a perfect square.
    pub delta_near_square: bool,
}

/// Advisory floating-point report: the same criterion as [`check_integral`]
/// read off from cosine sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericReport {
    pub n: u64,
    pub s1: Vec<u64>,
    pub s2: Vec<u64>,
    pub tolerance: f64,
    pub rows: Vec<NumericRow>,
    /// True when every row passes all three nearness tests. Advisory only:
    /// the exact path is the authority.
    pub integral_advisory: bool,
}

fn near_integer(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() <= tol
}

fn near_perfect_square(x: f64, tol: f64) -> bool {
    if !near_integer(x, tol) {
        return false;
    }
    let k = x.round();
    k >= 0.0 && is_perfect_square(k as i64)
}

/// Evaluates the integrality criterion in floating point, flagging each
/// quantity as near-integer / near-square within `tol`.
///
/// This is a diagnostic view, not a decision procedure: rounding can
/// misclassify contrived inputs, which is exactly why [`check_integral`]
/// exists. On every set where both have been compared they agree at
/// `tol = 1e-6`.
pub fn check_numeric(s: &ConnectionSet, tol: f64) -> Result<NumericReport, IntegralityError> {
    let n = s.n();
    if n < 3 {
        return Err(IntegralityError::BadModulus(n));
    }
    let m1 = RotationMultiset::from_set(s.s1(), n);
    let m1sq = s.s1_squared();
    let m2sq = s.s2_squared();
    let mut rows = Vec::new();
    for h in 1..=(n - 1) / 2 {
        let chi_s1 = chi_h_float(&m1, h);
        let chi_sq_sum = chi_h_float(&m1sq, h) + chi_h_float(&m2sq, h);
        let delta = 2.0 * chi_sq_sum - chi_s1 * chi_s1;
        rows.push(NumericRow {
            h,
            chi_s1,
            chi_sq_sum,
            delta,
            chi_s1_near_integer: near_integer(chi_s1, tol),
            chi_sq_sum_near_integer: near_integer(chi_sq_sum, tol),
            delta_near_square: near_perfect_square(delta, tol),
        });
    }
    let integral_advisory = rows
        .iter()
        .all(|r| r.chi_s1_near_integer && r.chi_sq_sum_near_integer && r.delta_near_square);
    Ok(NumericReport {
        n,
        s1: s.s1().iter().copied().collect(),
        s2: s.s2().iter().copied().collect(),
        tolerance: tol,
        rows,
        integral_advisory,
    })
}

/// True when `S₁` and the reflection indices of `S₂` are both unions of
/// atoms of `Z_n`.
///
/// This condition is sufficient for integrality but not necessary: over
/// `D_9`, `S₂ = {0, 3}` is integral yet `{0, 3}` is strictly inside
/// `[a⁹] ∪ [a³] = {0, 3, 6}`.
pub fn boolean_pair_sufficient(s: &ConnectionSet) -> bool {
    s.s1_boolean_decomposition().is_some() && boolean_decomposition(s.s2(), s.n()).is_some()
}

/// The shape of a two-atom `S₂²` that survives the perfect-square test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CosetForm {
    /// `S₂ = {j + i·(n/p) : 0 ≤ i < p}`: a full coset of the order-`p`
    /// rotation subgroup.
    Full { p: u64, j: u64 },
    /// A full coset with the element at index `k` removed:
    /// `S₂ = {j + i·(n/p) : 0 ≤ i < p, i ≠ k}`.
    Punctured { p: u64, j: u64, k: u64 },
    /// Two-atom, but no coset shape fits; the graph is not integral.
    NoMatch,
}

/// Classification of a connection set whose `S₂²` spans exactly two atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoIntegralClassification {
    pub n: u64,
    /// `t = |S₂|`, which is also the coefficient of the identity atom in
    /// `S₂²`.
    pub t: u64,
    /// Divisor of `n` labeling the unique non-identity atom of `S₂²`.
    pub d2: u64,
    /// `n / d2`: the order of the rotation subgroup generated by `a^{d2}`.
    pub n2: u64,
    pub form: CosetForm,
}

/// For odd `n`, classifies a connection set whose `S₂²` is supported on
/// exactly two atoms (the identity atom plus one other).
///
/// Such a graph is integral if and only if `n / d2` is a prime `p` and
/// `|S₂| ∈ {p − 1, p}`; in that case `S₂` is forced to be a full or
/// once-punctured coset of the order-`p` rotation subgroup, and the returned
/// [`CosetForm`] pins down which one. When the size test fails the form is
/// [`CosetForm::NoMatch`] and the graph is not integral.
///
/// Errors with [`IntegralityError::NotTwoAtoms`] when `S₂²` is not
/// atom-constant or spans a number of atoms other than two.
pub fn classify_two_integral(
    s: &ConnectionSet,
) -> Result<TwoIntegralClassification, IntegralityError> {
    let n = s.n();
    if n < 3 {
        return Err(IntegralityError::BadModulus(n));
    }
    if n % 2 == 0 {
        return Err(IntegralityError::EvenModulus(n));
    }
    let cone = s.s2_squared().cone_decomposition().ok_or_else(|| {
        IntegralityError::NotTwoAtoms {
            details: "S2^2 is not constant on the atoms of Z_n".to_string(),
        }
    })?;
    if cone.num_atoms() != 2 {
        return Err(IntegralityError::NotTwoAtoms {
            details: format!("S2^2 spans {} atom(s), need 2", cone.num_atoms()),
        });
    }
    let t = cone.coeff(n);
    if t == 0 {
        return Err(IntegralityError::NotTwoAtoms {
            details: "the identity atom is missing from S2^2".to_string(),
        });
    }
    debug_assert_eq!(t, s.s2().len() as u64);
    let (&d2, &m2) = cone
        .coeffs()
        .iter()
        .find(|&(&d, _)| d != n)
        .expect("two atoms, one of which is not the identity");
    let n2 = n / d2;
    // Mass accounting: |S₂|² ordered pairs split into t diagonal ones and
    // m2·φ(n2) in the non-identity atom.
    debug_assert_eq!(t * t, t + m2 * crate::numtheory::euler_phi(n2));

    // Size test: with the coefficients (t, m2) fixed by |S₂| and mass
    // accounting, every Δ_h = 4(t + m2·c(h, n2)) is a perfect square exactly
    // when n2 is prime and t ∈ {n2 − 1, n2}.
    let form = if is_prime(n2) && (t == n2 || t == n2 - 1) {
        let p = n2;
        let j = s.s2().iter().next().copied().expect("t > 0") % d2;
        if s.s2().iter().any(|&u| u % d2 != j) {
            // The size test passed, so S₂ must sit inside a single coset of
            // ⟨a^{d2}⟩; two residues would falsify the classification.
            return Err(IntegralityError::Internal(format!(
                "S2 of {s} passes the two-atom size test but spans several cosets of <a^{d2}>"
            )));
        }
        if t == p {
            CosetForm::Full { p, j }
        } else {
            let missing: Vec<u64> = (0..p).filter(|i| !s.s2().contains(&(j + i * d2))).collect();
            let [k] = missing[..] else {
                return Err(IntegralityError::Internal(format!(
                    "S2 of {s} should be one puncture short of a coset, missing indices {missing:?}"
                )));
            };
            CosetForm::Punctured { p, j, k }
        }
    } else {
        CosetForm::NoMatch
    };

    // Cross-check the size test against the discriminants themselves.
    let squares_ok = (1..=(n - 1) / 2).all(|h| is_perfect_square(2 * chi_h_exact(&cone, h)));
    if squares_ok != (form != CosetForm::NoMatch) {
        return Err(IntegralityError::Internal(format!(
            "size test and perfect-square test disagree for {s}: \
             squares_ok = {squares_ok}, form = {form:?}"
        )));
    }

    Ok(TwoIntegralClassification { n, t, d2, n2, form })
}

/// The complete list of integral connection sets over `D_p` for an odd
/// prime `p`, in a fixed deterministic order.
///
/// `S₁` ranges over `{∅, [a]}` (the only atom unions in `Z_p` besides the
/// identity atom) and `S₂` over the `p` singletons, the `p` once-punctured
/// full sets, and the full set `Z_p` — `2(2p + 1)` sets in total. Every
/// other choice with nonempty `S₂` is non-integral, and `S₁ = [a]` alone is
/// the only nonempty integral choice with `S₂ = ∅`; pass
/// `include_empty_s2 = true` to append the two `S₂ = ∅` cases (their graphs
/// are disconnected).
pub fn dp_integral_sets(
    p: u64,
    include_empty_s2: bool,
) -> Result<Vec<ConnectionSet>, IntegralityError> {
    if p < 3 || !is_prime(p) {
        return Err(IntegralityError::NotOddPrime(p));
    }
    let s1_choices: [Vec<u64>; 2] = [Vec::new(), (1..p).collect()];
    let mut out = Vec::new();
    for s1 in &s1_choices {
        for k in 0..p {
            out.push(
                ConnectionSet::new(p, s1.iter().copied(), [k])
                    .expect("singleton S2 is always valid"),
            );
        }
        for k in 0..p {
            out.push(
                ConnectionSet::new(p, s1.iter().copied(), (0..p).filter(|&i| i != k))
                    .expect("punctured S2 is always valid"),
            );
        }
        out.push(
            ConnectionSet::new(p, s1.iter().copied(), 0..p).expect("full S2 is always valid"),
        );
    }
    if include_empty_s2 {
        for s1 in &s1_choices {
            out.push(
                ConnectionSet::new(p, s1.iter().copied(), [])
                    .expect("empty S2 is always valid"),
            );
        }
    }
    Ok(out)
}
