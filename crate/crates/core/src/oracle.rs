//! Independent ground truth: brute-force spectral computations straight from
//! the adjacency matrix, with no character theory anywhere in the path.
//!
//! The adjacency matrix of `X(D_n, S)` is built directly from group
//! products (`u ~ v` iff `u⁻¹v ∈ S`), its characteristic polynomial is
//! computed exactly over arbitrary-precision integers with the
//! division-free Samuelson–Berkowitz recurrence, and integrality is decided
//! by complete deflation over the integer root candidates `r ∈ [−|S|, |S|]`
//! (the eigenvalues of an `|S|`-regular graph lie in that interval). A
//! floating-point Jacobi eigensolver supplies numeric eigenvalues for
//! cross-checking the analytic spectrum.
//!
//! This module deliberately imports nothing from `spectra` or `integrality`;
//! the only shared code is the group arithmetic itself. Its verdicts are
//! meaningful as verification exactly because they are computed the dumb way.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::group::{ConnectionSet, DihedralElement};

/// The `2n × 2n` adjacency matrix of `X(D_n, S)`, vertices ordered
/// `a⁰, …, a^{n−1}, b·a⁰, …, b·a^{n−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: u64,
    order: usize,
    data: Vec<u8>, // row-major 0/1
}

impl AdjacencyMatrix {
    /// Group order parameter `n` (the matrix has order `2n`).
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Matrix order `2n`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry `A[i][j] ∈ {0, 1}`.
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.order + j]
    }

    /// Sum of row `i`; equals `|S|` for every row by regularity.
    pub fn row_sum(&self, i: usize) -> u64 {
        self.data[i * self.order..(i + 1) * self.order]
            .iter()
            .map(|&b| b as u64)
            .sum()
    }

    /// The group element at vertex index `i`.
    pub fn vertex(&self, i: usize) -> DihedralElement {
        let n = self.n;
        if (i as u64) < n {
            DihedralElement::rotation(i as u64, n)
        } else {
            DihedralElement::reflection(i as u64 - n, n)
        }
    }
}

/// Builds the adjacency matrix: `A[u][v] = 1` iff `vertex(u)⁻¹·vertex(v) ∈ S`.
/// Symmetric with zero diagonal because `S = S⁻¹` and `1 ∉ S`.
pub fn build_adjacency(s: &ConnectionSet) -> AdjacencyMatrix {
    let n = s.n();
    let order = (2 * n) as usize;
    let mut m = AdjacencyMatrix { n, order, data: vec![0; order * order] };
    for i in 0..order {
        let inv = m.vertex(i).inverse();
        for j in 0..order {
            if s.contains(inv.multiply(m.vertex(j))) {
                m.data[i * order + j] = 1;
            }
        }
    }
    debug_assert!((0..order).all(|i| m.entry(i, i) == 0));
    debug_assert!((0..order)
        .all(|i| (0..order).all(|j| m.entry(i, j) == m.entry(j, i))));
    m
}

/// A monic polynomial with exact integer coefficients, stored
/// degree-descending (`coeffs[0]` is the leading coefficient 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntegerPolynomial {
    /// Builds from degree-descending coefficients.
    ///
    /// # Panics
    ///
    /// Panics if the coefficient list is empty or the polynomial not monic.
    pub fn from_coeffs_descending(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        assert!(coeffs[0].is_one(), "expected a monic polynomial");
        IntegerPolynomial { coeffs }
    }

    /// Degree-descending coefficients.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in &self.coeffs {
            acc = acc * x + c;
        }
        acc
    }

    /// Divides by `(x − r)` if the division is exact, via synthetic division.
    pub fn deflate(&self, r: i64) -> Option<IntegerPolynomial> {
        if self.degree() == 0 {
            return None;
        }
        let r = BigInt::from(r);
        let mut quotient = Vec::with_capacity(self.degree());
        let mut carry = BigInt::zero();
        for c in &self.coeffs[..self.degree()] {
            carry = carry * &r + c;
            quotient.push(carry.clone());
        }
        let remainder = carry * &r + &self.coeffs[self.degree()];
        remainder.is_zero().then(|| IntegerPolynomial { coeffs: quotient })
    }
}

impl fmt::Display for IntegerPolynomial {
    /// Degree-descending coefficient list, e.g. `[1, 0, -12, -16, 0, 0, 0]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Exact characteristic polynomial `det(xI − A)` by the Samuelson–Berkowitz
/// recurrence (division-free; processes trailing principal submatrices,
/// combining each stage through a Toeplitz convolution).
pub fn char_poly(a: &AdjacencyMatrix) -> IntegerPolynomial {
    let order = a.order();
    // 0/1 entries make every matrix-vector product a plain selective sum
    let col_below = |m: usize| -> Vec<BigInt> {
        (m + 1..order).map(|i| BigInt::from(a.entry(i, m))).collect()
    };
    let row_dot = |m: usize, v: &[BigInt]| -> BigInt {
        let mut acc = BigInt::zero();
        for (idx, x) in v.iter().enumerate() {
            if a.entry(m, m + 1 + idx) == 1 {
                acc += x;
            }
        }
        acc
    };
    let trailing_matvec = |base: usize, v: &[BigInt]| -> Vec<BigInt> {
        (base..order)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (idx, x) in v.iter().enumerate() {
                    if a.entry(i, base + idx) == 1 {
                        acc += x;
                    }
                }
                acc
            })
            .collect()
    };

    // characteristic polynomial of the empty trailing submatrix
    let mut poly = vec![BigInt::one()];
    for m in (0..order).rev() {
        let size = order - m;
        // first column of the stage's Toeplitz operator:
        // [1, −a_mm, −R·C, −R·M·C, −R·M²·C, …]
        let mut s = Vec::with_capacity(size + 1);
        s.push(BigInt::one());
        s.push(-BigInt::from(a.entry(m, m)));
        if size >= 2 {
            let mut v = col_below(m);
            s.push(-row_dot(m, &v));
            for _ in 3..=size {
                v = trailing_matvec(m + 1, &v);
                s.push(-row_dot(m, &v));
            }
        }
        // newpoly = (Toeplitz from s) · poly, a truncated convolution
        let mut newpoly = vec![BigInt::zero(); size + 1];
        for (j, p) in poly.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (k, sv) in s.iter().enumerate() {
                if j + k > size {
                    break;
                }
                if !sv.is_zero() {
                    newpoly[j + k] += sv * p;
                }
            }
        }
        poly = newpoly;
    }
    debug_assert!(poly[0].is_one());
    // adjacency matrices are traceless, so the x^{2n−1} coefficient vanishes
    debug_assert!(order == 0 || poly[1].is_zero());
    IntegerPolynomial { coeffs: poly }
}

/// Outcome of the brute-force integrality decision: either the complete
/// integer root multiset, or the roots found so far plus the factor that
/// refused to split into integer linear factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityCertificate {
    pub integral: bool,
    /// `(root, multiplicity)` pairs, descending by root.
    pub roots: Vec<(i64, u64)>,
    /// The non-split factor when not integral.
    pub surviving_factor: Option<IntegerPolynomial>,
}

/// Decides integrality of `X(D_n, S)` by computing the characteristic
/// polynomial and deflating every integer candidate `r ∈ [−|S|, |S|]` to
/// exhaustion. The candidate interval is the Perron–Frobenius bound for an
/// `|S|`-regular graph; candidates repeat until they stop dividing, so
/// multiplicities are found in full.
pub fn is_integral(s: &ConnectionSet) -> IntegralityCertificate {
    let mut poly = char_poly(&build_adjacency(s));
    let bound = s.size() as i64;
    let mut roots = Vec::new();
    for r in (-bound..=bound).rev() {
        let mut mult = 0u64;
        while let Some(q) = poly.deflate(r) {
            poly = q;
            mult += 1;
        }
        if mult > 0 {
            roots.push((r, mult));
        }
        if poly.degree() == 0 {
            break;
        }
    }
    let integral = poly.degree() == 0;
    IntegralityCertificate { integral, roots, surviving_factor: (!integral).then_some(poly) }
}

/// All `2n` eigenvalues by cyclic Jacobi rotations, sorted descending.
/// Converges far past the promised 1e−10 relative accuracy at these orders.
pub fn numeric_eigenvalues(a: &AdjacencyMatrix) -> Vec<f64> {
    let order = a.order();
    let mut m: Vec<Vec<f64>> = (0..order)
        .map(|i| (0..order).map(|j| a.entry(i, j) as f64).collect())
        .collect();
    let scale: f64 = m
        .iter()
        .flat_map(|row| row.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    if scale > 0.0 {
        for _sweep in 0..100 {
            let off: f64 = (0..order)
                .map(|i| (i + 1..order).map(|j| m[i][j] * m[i][j]).sum::<f64>())
                .sum();
            if off.sqrt() <= 1e-13 * scale {
                break;
            }
            for p in 0..order {
                for q in p + 1..order {
                    let apq = m[p][q];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                    let sgn = if theta < 0.0 { -1.0 } else { 1.0 };
                    let t = sgn / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..order {
                        let (mkp, mkq) = (m[k][p], m[k][q]);
                        m[k][p] = c * mkp - s * mkq;
                        m[k][q] = s * mkp + c * mkq;
                    }
                    for k in 0..order {
                        let (mpk, mqk) = (m[p][k], m[q][k]);
                        m[p][k] = c * mpk - s * mqk;
                        m[q][k] = s * mpk + c * mqk;
                    }
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..order).map(|i| m[i][i]).collect();
    eig.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    eig
}

/// Graphviz DOT rendering of `X(D_n, S)`, vertices labeled `a^k` / `ba^k`.
pub fn to_dot(s: &ConnectionSet) -> String {
    let a = build_adjacency(s);
    let label = |i: usize| format!("\"{}\"", a.vertex(i)).replace("\"1\"", "\"a^0\"");
    let mut out = String::from("graph cayley {\n");
    for i in 0..a.order() {
        out.push_str(&format!("  {};\n", label(i)));
    }
    for i in 0..a.order() {
        for j in i + 1..a.order() {
            if a.entry(i, j) == 1 {
                out.push_str(&format!("  {} -- {};\n", label(i), label(j)));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Expands ∏ (x − r) over the given roots — the independent expected
    /// value for characteristic polynomials with known spectra.
    fn poly_from_roots(roots: &[i64]) -> Vec<BigInt> {
        let mut coeffs = vec![BigInt::one()];
        for &r in roots {
            let mut next = vec![BigInt::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * big(r);
            }
            coeffs = next;
        }
        coeffs
    }

    /// Naive polynomial product for building expected factors.
    fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// Fraction-free Bareiss determinant over exact integers; the
    /// independent check for characteristic-polynomial values.
    fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    fn x_minus_a(a: &AdjacencyMatrix, x: i64) -> Vec<Vec<BigInt>> {
        (0..a.order())
            .map(|i| {
                (0..a.order())
                    .map(|j| {
                        let diag = if i == j { big(x) } else { BigInt::zero() };
                        diag - big(a.entry(i, j) as i64)
                    })
                    .collect()
            })
            .collect()
    }

    fn complete_graph_set() -> ConnectionSet {
        ConnectionSet::new(3, [1, 2], [0, 1, 2]).unwrap()
    }

    #[test]
    fn adjacency_of_complete_graph() {
        let a = build_adjacency(&complete_graph_set());
        assert_eq!(a.order(), 6);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(a.entry(i, j), u8::from(i != j));
            }
        }
    }

    #[test]
    fn adjacency_is_regular_and_bipartite_for_reflection_sets() {
        let s = ConnectionSet::new(7, [], [1, 2, 4]).unwrap();
        let a = build_adjacency(&s);
        for i in 0..a.order() {
            assert_eq!(a.row_sum(i), 3);
        }
        // no edges inside the rotation part or inside the reflection part
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(a.entry(i, j), 0);
                assert_eq!(a.entry(7 + i, 7 + j), 0);
            }
        }
    }

    #[test]
    fn adjacency_of_empty_set_is_zero() {
        let s = ConnectionSet::new(5, [], []).unwrap();
        let a = build_adjacency(&s);
        assert!(a.data.iter().all(|&b| b == 0));
    }

    #[test]
    fn char_poly_of_known_graphs() {
        // K₆: (x−5)(x+1)⁵
        let p = char_poly(&build_adjacency(&complete_graph_set()));
        assert_eq!(p.coeffs(), poly_from_roots(&[5, -1, -1, -1, -1, -1]));

        // zero matrix: x^{2n}
        let s = ConnectionSet::new(4, [], []).unwrap();
        let p = char_poly(&build_adjacency(&s));
        assert_eq!(p.coeffs(), poly_from_roots(&[0; 8]));

        // n=3, s1={1,2}, s2={0,1}: (x−4)·x³·(x+2)²
        let s = ConnectionSet::new(3, [1, 2], [0, 1]).unwrap();
        let p = char_poly(&build_adjacency(&s));
        assert_eq!(p.coeffs(), poly_from_roots(&[4, 0, 0, 0, -2, -2]));
    }

    #[test]
    fn char_poly_agrees_with_bareiss_determinant() {
        let sets = [
            ConnectionSet::new(3, [1, 2], [0, 1]).unwrap(),
            ConnectionSet::new(4, [2], [1, 3]).unwrap(),
            ConnectionSet::new(5, [1, 4], [0, 2]).unwrap(),
            ConnectionSet::new(6, [3], [0, 2, 4]).unwrap(),
            ConnectionSet::new(7, [], [1, 2, 4]).unwrap(),
            ConnectionSet::new(8, [1, 7, 4], [5]).unwrap(),
            ConnectionSet::new(9, [3, 6], []).unwrap(),
            ConnectionSet::new(10, [2, 8, 5], [0, 1, 2, 3]).unwrap(),
            ConnectionSet::new_degenerate(1, [], [0]).unwrap(),
            ConnectionSet::new_degenerate(2, [1], [0, 1]).unwrap(),
        ];
        // deterministic pseudo-random evaluation points
        let mut state = 0x853c49e6748fea9bu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as i64 % 21 - 10
        };
        for s in &sets {
            let a = build_adjacency(s);
            let p = char_poly(&a);
            assert_eq!(p.degree(), a.order());
            for _ in 0..4 {
                let r = next();
                assert_eq!(
                    p.eval(&big(r)),
                    bareiss_det(x_minus_a(&a, r)),
                    "char poly of {s} at x = {r}"
                );
            }
        }
    }

    #[test]
    fn char_poly_coefficient_identities() {
        // trace ⇒ zero x^{2n−1} coefficient; edge count ⇒ the x^{2n−2}
        // coefficient equals −n·|S|
        for (n, s1, s2) in [
            (5u64, vec![1, 4], vec![0, 3]),
            (6, vec![2, 4], vec![1]),
            (7, vec![], vec![1, 2, 4]),
            (9, vec![1, 8, 3, 6], vec![0, 1, 2]),
        ] {
            let s = ConnectionSet::new(n, s1, s2).unwrap();
            let p = char_poly(&build_adjacency(&s));
            assert!(p.coeffs()[1].is_zero());
            assert_eq!(p.coeffs()[2], big(-((n * s.size()) as i64)));
        }
    }

    #[test]
    fn deflation_and_eval() {
        let p = IntegerPolynomial::from_coeffs_descending(poly_from_roots(&[4, 0, 0, 0, -2, -2]));
        assert_eq!(p.eval(&big(1)), big(1 - 12 - 16)); // x⁶−12x⁴−16x³ at 1
        let q = p.deflate(4).unwrap();
        assert_eq!(q.coeffs(), poly_from_roots(&[0, 0, 0, -2, -2]));
        assert!(p.deflate(3).is_none());
    }

    #[test]
    fn integrality_certificates() {
        // K₆ is integral with the complete-graph spectrum
        let cert = is_integral(&complete_graph_set());
        assert!(cert.integral);
        assert_eq!(cert.roots, vec![(5, 1), (-1, 5)]);
        assert_eq!(cert.surviving_factor, None);

        // three reflections over D₇: (x²−2)⁶ survives deflation
        let s = ConnectionSet::new(7, [], [1, 2, 4]).unwrap();
        let cert = is_integral(&s);
        assert!(!cert.integral);
        assert_eq!(cert.roots, vec![(3, 1), (-3, 1)]);
        let x2_minus_2 = vec![big(1), big(0), big(-2)];
        let mut expect = x2_minus_2.clone();
        for _ in 1..6 {
            expect = poly_mul(&expect, &x2_minus_2);
        }
        assert_eq!(cert.surviving_factor.unwrap().coeffs(), expect);

        // half-turn plus even reflections over D₆
        let s = ConnectionSet::new(6, [3], [0, 2, 4]).unwrap();
        assert!(is_integral(&s).integral);

        // empty set: x^{2n}, all roots zero
        let s = ConnectionSet::new(5, [], []).unwrap();
        let cert = is_integral(&s);
        assert!(cert.integral);
        assert_eq!(cert.roots, vec![(0, 10)]);
    }

    #[test]
    fn numeric_eigenvalues_of_cycles() {
        // {b, ba} generates a 2-regular connected graph: the cycle C_{2n}
        use std::f64::consts::PI;
        for n in [3u64, 5, 8] {
            let s = ConnectionSet::new(n, [], [0, 1]).unwrap();
            let eig = numeric_eigenvalues(&build_adjacency(&s));
            let mut expect: Vec<f64> =
                (0..2 * n).map(|k| 2.0 * (PI * k as f64 / n as f64).cos()).collect();
            expect.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (got, want) in eig.iter().zip(&expect) {
                assert!((got - want).abs() < 1e-10, "C_{}: {got} vs {want}", 2 * n);
            }
        }
    }

    #[test]
    fn numeric_eigenvalues_of_small_graphs() {
        let eig = numeric_eigenvalues(&build_adjacency(&complete_graph_set()));
        let expect = [5.0, -1.0, -1.0, -1.0, -1.0, -1.0];
        for (got, want) in eig.iter().zip(expect) {
            assert!((got - want).abs() < 1e-10);
        }

        let s = ConnectionSet::new(4, [], []).unwrap();
        assert_eq!(numeric_eigenvalues(&build_adjacency(&s)), vec![0.0; 8]);

        // degenerate orders: D₁ with one reflection is K₂, D₂ with both
        // reflections is the 4-cycle
        let s = ConnectionSet::new_degenerate(1, [], [0]).unwrap();
        let eig = numeric_eigenvalues(&build_adjacency(&s));
        assert!((eig[0] - 1.0).abs() < 1e-12 && (eig[1] + 1.0).abs() < 1e-12);

        let s = ConnectionSet::new_degenerate(2, [], [0, 1]).unwrap();
        let eig = numeric_eigenvalues(&build_adjacency(&s));
        let expect = [2.0, 0.0, 0.0, -2.0];
        for (got, want) in eig.iter().zip(expect) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn dot_export_lists_all_vertices_and_edges() {
        let s = ConnectionSet::new(3, [], [0]).unwrap();
        let dot = to_dot(&s);
        assert!(dot.starts_with("graph cayley {"));
        for v in ["\"a^0\"", "\"a^1\"", "\"a^2\"", "\"ba^0\"", "\"ba^1\"", "\"ba^2\""] {
            assert!(dot.contains(v), "missing vertex {v} in:\n{dot}");
        }
        // exactly the three matching edges a^k -- ba^k
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert!(dot.contains("\"a^0\" -- \"ba^0\";"));
    }
}
