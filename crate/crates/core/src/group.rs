//! The dihedral group `D_n = ⟨a, b | aⁿ = b² = 1, bab = a⁻¹⟩` and the
//! combinatorics its Cayley graphs are built from: connection sets,
//! gcd-class atoms of the rotation subgroup `⟨a⟩ ≅ Z_n`, Boolean-algebra and
//! integral-cone membership, and the difference/sum multisets `S₂²`, `S₁²`.
//!
//! Conventions used throughout the crate:
//!
//! * An element is `b^flip · a^rot` with `0 ≤ rot < n`.
//! * A connection set `S = S₁ ∪ S₂` is stored as two exponent sets:
//!   `s1` for rotations `a^u` (so `0 ∉ s1` and `s1 = −s1 mod n`) and `s2`
//!   for reflections `b·a^u`. Reflections are involutions, so `s2` needs no
//!   closure condition.
//! * The atom of `Z_n` containing `a^l` is labeled by the divisor
//!   `d = gcd(l, n)`; the identity atom is labeled `d = n` (gcd(0, n) = n).
//!
//! The multiset `S₂²` collects products of two reflections:
//! `(b a^x)(b a^y) = a^{y−x}`, i.e. it is the difference multiset of `s2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numtheory::{divisors, euler_phi, gcd};

/// Errors from connection-set validation and parsing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    /// The exact character machinery needs the degree-2 characters of `D_n`,
    /// which only exist for `n ≥ 3` (`D₁`, `D₂` are abelian).
    #[error("modulus n = {0} is out of range: need n ≥ 3 (D_1 and D_2 are degenerate)")]
    BadModulus(u64),
    /// `a^0` is the group identity and may not appear in a connection set.
    #[error("identity rotation a^0 cannot belong to a connection set")]
    IdentityInSet,
    /// The rotation part must satisfy `S₁ = S₁⁻¹`.
    #[error("rotation set not inverse-closed: contains a^{u} but not a^{missing} (n = {n})")]
    NotInverseClosed { u: u64, missing: u64, n: u64 },
    /// Malformed compact text form.
    #[error("cannot parse connection set: {0}")]
    Parse(String),
}

/// A group element `b^flip · a^rot` of `D_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DihedralElement {
    n: u64,
    flip: bool,
    rot: u64,
}

impl DihedralElement {
    /// The identity element of `D_n`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0` (all constructors do).
    pub fn identity(n: u64) -> Self {
        Self::rotation(0, n)
    }

    /// The rotation `a^k` (exponent reduced mod `n`).
    pub fn rotation(k: u64, n: u64) -> Self {
        assert!(n > 0, "D_0 does not exist");
        DihedralElement { n, flip: false, rot: k % n }
    }

    /// The reflection `b·a^k` (exponent reduced mod `n`).
    pub fn reflection(k: u64, n: u64) -> Self {
        assert!(n > 0, "D_0 does not exist");
        DihedralElement { n, flip: true, rot: k % n }
    }

    /// Order parameter of the group this element lives in.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Exponent of `a`, in `[0, n)`.
    pub fn rot(&self) -> u64 {
        self.rot
    }

    /// Whether the element contains the reflection `b`.
    pub fn flip(&self) -> bool {
        self.flip
    }

    /// Group product under the relations `aⁿ = b² = 1`, `bab = a⁻¹`.
    ///
    /// Written multiplicatively: `b^f·a^r · b^g·a^s = b^{f⊕g} · a^{s ± r}`
    /// with the sign flipped exactly when `g` is set (since `a^r b = b a^{−r}`).
    ///
    /// # Panics
    ///
    /// Panics if the operands live in different groups.
    pub fn multiply(self, other: Self) -> Self {
        assert_eq!(self.n, other.n, "cannot multiply elements of D_{} and D_{}", self.n, other.n);
        let rot = if other.flip {
            (other.rot + self.n - self.rot) % self.n
        } else {
            (self.rot + other.rot) % self.n
        };
        DihedralElement { n: self.n, flip: self.flip ^ other.flip, rot }
    }

    /// Two-sided inverse: `(a^k)⁻¹ = a^{n−k}`; reflections are involutions.
    pub fn inverse(self) -> Self {
        if self.flip {
            self
        } else {
            DihedralElement { n: self.n, flip: false, rot: (self.n - self.rot) % self.n }
        }
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.flip, self.rot) {
            (false, 0) => write!(f, "1"),
            (false, r) => write!(f, "a^{r}"),
            (true, r) => write!(f, "ba^{r}"),
        }
    }
}

/// Shadow struct for deserialization; every parsed set passes full
/// validation, so a JSON round trip always reproduces the canonical form.
#[derive(Deserialize)]
struct RawConnectionSet {
    n: u64,
    s1: Vec<u64>,
    s2: Vec<u64>,
}

/// A validated connection set `S = S₁ ∪ S₂ ⊆ D_n ∖ {1}` with `S = S⁻¹`,
/// stored as exponent sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawConnectionSet")]
pub struct ConnectionSet {
    n: u64,
    s1: BTreeSet<u64>,
    s2: BTreeSet<u64>,
}

impl TryFrom<RawConnectionSet> for ConnectionSet {
    type Error = GroupError;

    fn try_from(raw: RawConnectionSet) -> Result<Self, GroupError> {
        ConnectionSet::new(raw.n, raw.s1, raw.s2)
    }
}

impl ConnectionSet {
    /// Validates and canonicalizes a connection set: indices are reduced mod
    /// `n`, `0 ∉ s1`, and `s1 = −s1 mod n`.
    ///
    /// Rejects `n < 3`; the degree-2 characters the spectral machinery is
    /// built on only exist from `D₃` up. The brute-force oracle alone also
    /// works for `D₁`/`D₂` — construct those via [`ConnectionSet::new_degenerate`].
    pub fn new(
        n: u64,
        s1: impl IntoIterator<Item = u64>,
        s2: impl IntoIterator<Item = u64>,
    ) -> Result<Self, GroupError> {
        if n < 3 {
            return Err(GroupError::BadModulus(n));
        }
        Self::validate(n, s1, s2)
    }

    /// Like [`ConnectionSet::new`] but admits the degenerate moduli
    /// `n ∈ {1, 2}` that the character-based pipeline rejects. Intended for
    /// exercising the brute-force oracle on tiny groups.
    pub fn new_degenerate(
        n: u64,
        s1: impl IntoIterator<Item = u64>,
        s2: impl IntoIterator<Item = u64>,
    ) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::BadModulus(0));
        }
        Self::validate(n, s1, s2)
    }

    fn validate(
        n: u64,
        s1: impl IntoIterator<Item = u64>,
        s2: impl IntoIterator<Item = u64>,
    ) -> Result<Self, GroupError> {
        let s1: BTreeSet<u64> = s1.into_iter().map(|u| u % n).collect();
        let s2: BTreeSet<u64> = s2.into_iter().map(|u| u % n).collect();
        if s1.contains(&0) {
            return Err(GroupError::IdentityInSet);
        }
        for &u in &s1 {
            let missing = (n - u) % n;
            if !s1.contains(&missing) {
                return Err(GroupError::NotInverseClosed { u, missing, n });
            }
        }
        Ok(ConnectionSet { n, s1, s2 })
    }

    /// Parses the compact text form `"n=7; s1=; s2=1,2,4"`.
    /// Whitespace-insensitive; the three keys may appear in any order.
    pub fn parse_compact(text: &str) -> Result<Self, GroupError> {
        let mut n: Option<u64> = None;
        let mut s1: Option<Vec<u64>> = None;
        let mut s2: Option<Vec<u64>> = None;
        for part in text.split(';') {
            let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| GroupError::Parse(format!("expected key=value, got {part:?}")))?;
            let parse_list = |v: &str| -> Result<Vec<u64>, GroupError> {
                v.split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<u64>()
                            .map_err(|_| GroupError::Parse(format!("bad integer {t:?}")))
                    })
                    .collect()
            };
            let duplicate = |key: &str| GroupError::Parse(format!("duplicate key {key:?}"));
            match key {
                "n" => {
                    let v = value
                        .parse::<u64>()
                        .map_err(|_| GroupError::Parse(format!("bad integer {value:?}")))?;
                    if n.replace(v).is_some() {
                        return Err(duplicate("n"));
                    }
                }
                "s1" => {
                    if s1.replace(parse_list(value)?).is_some() {
                        return Err(duplicate("s1"));
                    }
                }
                "s2" => {
                    if s2.replace(parse_list(value)?).is_some() {
                        return Err(duplicate("s2"));
                    }
                }
                other => return Err(GroupError::Parse(format!("unknown key {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| GroupError::Parse("missing key \"n\"".into()))?;
        let s1 = s1.ok_or_else(|| GroupError::Parse("missing key \"s1\"".into()))?;
        let s2 = s2.ok_or_else(|| GroupError::Parse("missing key \"s2\"".into()))?;
        Self::new(n, s1, s2)
    }

    /// Order parameter `n` of `D_n` (the graph has `2n` vertices).
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Exponents `u` with `a^u ∈ S₁`.
    pub fn s1(&self) -> &BTreeSet<u64> {
        &self.s1
    }

    /// Exponents `u` with `b·a^u ∈ S₂`.
    pub fn s2(&self) -> &BTreeSet<u64> {
        &self.s2
    }

    /// `|S| = |S₁| + |S₂|`, the degree of the Cayley graph.
    pub fn size(&self) -> u64 {
        (self.s1.len() + self.s2.len()) as u64
    }

    /// True for the empty connection set (edgeless graph).
    pub fn is_empty(&self) -> bool {
        self.s1.is_empty() && self.s2.is_empty()
    }

    /// Membership test for a group element.
    pub fn contains(&self, e: DihedralElement) -> bool {
        assert_eq!(e.n(), self.n, "element of D_{} tested against a set over D_{}", e.n(), self.n);
        if e.flip() {
            self.s2.contains(&e.rot())
        } else {
            e.rot() != 0 && self.s1.contains(&e.rot())
        }
    }

    /// The elements of `S` in a fixed order: rotations first, then reflections.
    pub fn elements(&self) -> impl Iterator<Item = DihedralElement> + '_ {
        let n = self.n;
        self.s1
            .iter()
            .map(move |&u| DihedralElement::rotation(u, n))
            .chain(self.s2.iter().map(move |&u| DihedralElement::reflection(u, n)))
    }

    /// The multiset `S₁² = {a^{x+y} : a^x, a^y ∈ S₁}`.
    pub fn s1_squared(&self) -> RotationMultiset {
        RotationMultiset::sums(&self.s1, self.n)
    }

    /// The multiset `S₂² = {(b a^x)(b a^y) : b a^x, b a^y ∈ S₂}`, i.e. the
    /// difference multiset of the reflection exponents.
    pub fn s2_squared(&self) -> RotationMultiset {
        RotationMultiset::differences(&self.s2, self.n)
    }

    /// `Some(decomposition)` iff `S₁` is an exact union of atoms, i.e. lies
    /// in the Boolean algebra `B(⟨a⟩)`.
    pub fn s1_boolean_decomposition(&self) -> Option<AtomDecomposition> {
        boolean_decomposition(&self.s1, self.n)
    }

    /// True iff `⟨S⟩ = D_n`, i.e. the Cayley graph is connected.
    /// Computed by closure: breadth-first search from the identity.
    pub fn is_generating(&self) -> bool {
        let n = self.n as usize;
        let generators: Vec<DihedralElement> = self.elements().collect();
        let index = |e: DihedralElement| (e.flip() as usize) * n + e.rot() as usize;
        let mut seen = vec![false; 2 * n];
        let mut stack = vec![DihedralElement::identity(self.n)];
        seen[index(stack[0])] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for &g in &generators {
                let y = x.multiply(g);
                if !seen[index(y)] {
                    seen[index(y)] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        reached == 2 * n
    }
}

impl fmt::Display for ConnectionSet {
    /// Formats as the compact text form accepted by [`ConnectionSet::parse_compact`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |set: &BTreeSet<u64>| {
            set.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "n={}; s1={}; s2={}", self.n, join(&self.s1), join(&self.s2))
    }
}

/// Divisor `d = gcd(l, n)` labeling the atom of `Z_n` containing `a^l`;
/// `l = 0` maps to `d = n`, the identity atom `[1] = [a^n]`.
pub fn atom_of(l: u64, n: u64) -> u64 {
    assert!(n > 0, "atoms of Z_0 are undefined");
    gcd(l % n, n)
}

/// Members of the atom `[a^d] = {u ∈ [0, n) : gcd(u, n) = d}`, ascending.
/// The atom has `φ(n/d)` members.
///
/// # Panics
///
/// Panics unless `d` divides `n`.
pub fn atom_members(d: u64, n: u64) -> Vec<u64> {
    assert!(n > 0 && d > 0 && n % d == 0, "atom label must be a divisor of n");
    (0..n).filter(|&u| atom_of(u, n) == d).collect()
}

/// A multiset over the rotation exponents `Z_n`, stored as a full
/// multiplicity vector (the moduli here are small, and dense storage makes
/// the cone test a constant-time lookup per element).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationMultiset {
    n: u64,
    mult: Vec<u64>,
}

impl RotationMultiset {
    /// The empty multiset over `Z_n`.
    pub fn zero(n: u64) -> Self {
        assert!(n > 0, "multisets over Z_0 are undefined");
        RotationMultiset { n, mult: vec![0; n as usize] }
    }

    /// Indicator multiset of a subset of `Z_n`.
    pub fn from_set(set: &BTreeSet<u64>, n: u64) -> Self {
        let mut m = Self::zero(n);
        for &u in set {
            m.mult[(u % n) as usize] = 1;
        }
        m
    }

    /// Multiset with an explicit multiplicity vector; `n` is its length.
    pub fn from_counts(counts: Vec<u64>) -> Self {
        assert!(!counts.is_empty(), "multisets over Z_0 are undefined");
        RotationMultiset { n: counts.len() as u64, mult: counts }
    }

    /// Difference multiset: multiplicity of `u` is `|{(x, y) ∈ set² : x − y ≡ u}|`.
    pub fn differences(set: &BTreeSet<u64>, n: u64) -> Self {
        let mut m = Self::zero(n);
        for &x in set {
            for &y in set {
                m.mult[((x + n - y) % n) as usize] += 1;
            }
        }
        m
    }

    /// Sum multiset: multiplicity of `u` is `|{(x, y) ∈ set² : x + y ≡ u}|`.
    pub fn sums(set: &BTreeSet<u64>, n: u64) -> Self {
        let mut m = Self::zero(n);
        for &x in set {
            for &y in set {
                m.mult[((x + y) % n) as usize] += 1;
            }
        }
        m
    }

    /// Modulus of the underlying `Z_n`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Multiplicity of `a^u` (exponent reduced mod `n`).
    pub fn mult(&self, u: u64) -> u64 {
        self.mult[(u % self.n) as usize]
    }

    /// The full multiplicity vector, indexed by exponent.
    pub fn counts(&self) -> &[u64] {
        &self.mult
    }

    /// Total multiplicity; `|set|²` for difference/sum multisets.
    pub fn mass(&self) -> u64 {
        self.mult.iter().sum()
    }

    /// True iff `mult(u) = mult(n − u)` for all `u` (the multiset is closed
    /// under inversion, as every `T` with `T = T⁻¹` squares to).
    pub fn is_negation_symmetric(&self) -> bool {
        (0..self.n).all(|u| self.mult(u) == self.mult(self.n - u))
    }

    /// `Some(coefficients)` iff the multiset lies in the integral cone
    /// `C(⟨a⟩)`: multiplicity constant on every atom. Atoms with
    /// coefficient 0 are omitted from the decomposition.
    pub fn cone_decomposition(&self) -> Option<AtomDecomposition> {
        let mut coeffs = BTreeMap::new();
        for d in divisors(self.n) {
            let members = atom_members(d, self.n);
            let m = self.mult[members[0] as usize];
            if members.iter().any(|&u| self.mult[u as usize] != m) {
                return None;
            }
            if m > 0 {
                coeffs.insert(d, m);
            }
        }
        Some(AtomDecomposition { n: self.n, coeffs })
    }
}

/// `Some(decomposition)` iff `set` is an exact union of atoms of `Z_n`
/// (membership in the Boolean algebra `B(⟨a⟩)`); all coefficients are 1.
/// The empty set is the empty union.
pub fn boolean_decomposition(set: &BTreeSet<u64>, n: u64) -> Option<AtomDecomposition> {
    let dec = RotationMultiset::from_set(set, n).cone_decomposition()?;
    debug_assert!(dec.coeffs.values().all(|&m| m == 1));
    Some(dec)
}

/// An element of the integral cone `C(⟨a⟩)` written over the atom basis:
/// `Σ_d m_d · [a^d]` with `d` ranging over divisors of `n`. A Boolean-algebra
/// element is the special case with all `m_d = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomDecomposition {
    n: u64,
    /// divisor `d` ↦ coefficient `m_d`; zero coefficients omitted.
    coeffs: BTreeMap<u64, u64>,
}

impl AtomDecomposition {
    /// Builds a decomposition directly from atom coefficients.
    ///
    /// # Panics
    ///
    /// Panics if some key is not a divisor of `n`.
    pub fn from_coeffs(n: u64, coeffs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let coeffs: BTreeMap<u64, u64> =
            coeffs.into_iter().filter(|&(_, m)| m > 0).collect();
        for &d in coeffs.keys() {
            assert!(d > 0 && n % d == 0, "atom label {d} is not a divisor of {n}");
        }
        AtomDecomposition { n, coeffs }
    }

    /// Modulus of the underlying `Z_n`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// divisor `d` ↦ coefficient `m_d`, ascending by `d`, zeros omitted.
    pub fn coeffs(&self) -> &BTreeMap<u64, u64> {
        &self.coeffs
    }

    /// Coefficient of the atom `[a^d]` (0 when absent).
    pub fn coeff(&self, d: u64) -> u64 {
        self.coeffs.get(&d).copied().unwrap_or(0)
    }

    /// Number of atoms with nonzero coefficient.
    pub fn num_atoms(&self) -> usize {
        self.coeffs.len()
    }

    /// Expands the decomposition back into a multiplicity vector.
    pub fn to_multiset(&self) -> RotationMultiset {
        let mut m = RotationMultiset::zero(self.n);
        for (&d, &c) in &self.coeffs {
            for u in atom_members(d, self.n) {
                m.mult[u as usize] = c;
            }
        }
        m
    }

    /// Total multiplicity `Σ_d m_d · φ(n/d)`.
    pub fn mass(&self) -> u64 {
        self.coeffs.iter().map(|(&d, &c)| c * euler_phi(self.n / d)).sum()
    }
}
