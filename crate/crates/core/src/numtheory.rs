//! Exact number-theoretic primitives: gcd, divisors, Euler's totient, the
//! Möbius function, Ramanujan sums, and integer perfect-square tests.
//!
//! Everything in this module is pure integer arithmetic. Ramanujan sums are
//! evaluated through the closed form
//!
//! ```text
//! c(s, n) = φ(n) / φ(n/g) · μ(n/g),   g = gcd(s, n),
//! ```
//!
//! never through the defining exponential sum, so the decision procedures
//! built on top of them stay exact. The division is exact because
//! `φ(d) | φ(n)` whenever `d | n`. Factorization is plain trial division:
//! the moduli handled here are graph order parameters, not cryptographic
//! numbers.

/// Greatest common divisor, with the conventions `gcd(0, n) = n` and
/// `gcd(0, 0) = 0`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing prime order. `factorize(1)` is the empty list.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0) is undefined");
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, in increasing order.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0, "divisors(0) is undefined");
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Euler's totient `φ(n) = |{1 ≤ k ≤ n : gcd(k, n) = 1}|`, with `φ(1) = 1`.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n > 0, "euler_phi(0) is undefined");
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Möbius function: `0` if a square divides `n`, otherwise `(−1)^k` where
/// `k` is the number of prime factors; `μ(1) = 1`.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn moebius(n: u64) -> i64 {
    assert!(n > 0, "moebius(0) is undefined");
    let fac = factorize(n);
    if fac.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    if fac.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// True iff `n` is prime.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Integer square root `⌊√n⌋` by Newton iteration on integers.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    // Newton's method converges from any start ≥ √n; seed from the float
    // sqrt and widen to u128 so x*x cannot overflow near u64::MAX.
    let mut x = ((n as f64).sqrt() as u128) + 2;
    loop {
        let next = (x + n as u128 / x) / 2;
        if next >= x {
            break;
        }
        x = next;
    }
    debug_assert!(x * x <= n as u128 && (x + 1) * (x + 1) > n as u128);
    x as u64
}

/// `Some(w)` with `w ≥ 0` and `w² = k` when `k` is a perfect square,
/// `None` otherwise. Negative inputs are never squares.
pub fn perfect_square_root(k: i64) -> Option<i64> {
    if k < 0 {
        return None;
    }
    let w = isqrt(k as u64);
    (w * w == k as u64).then_some(w as i64)
}

/// True iff `k = w²` for some integer `w ≥ 0`.
pub fn is_perfect_square(k: i64) -> bool {
    perfect_square_root(k).is_some()
}

/// A Ramanujan sum `c(s, n) = Σ e^{2πisk/n}` over `1 ≤ k ≤ n` with
/// `gcd(k, n) = 1`, carried together with its arguments.
///
/// The value is always the exact integer `φ(n)/φ(n/g) · μ(n/g)` with
/// `g = gcd(s, n)`; in particular `|value| ≤ φ(n)`, and `c(0, n) = φ(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamanujanValue {
    pub s: u64,
    pub n: u64,
    pub value: i64,
}

impl RamanujanValue {
    /// Evaluates `c(s, n)` exactly.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn new(s: u64, n: u64) -> Self {
        assert!(n > 0, "ramanujan_sum with n = 0 is undefined");
        // gcd(0, n) = n, so s = 0 lands in the c(s,n) = φ(n) branch.
        let g = gcd(s % n, n);
        let q = n / g;
        let phi_n = euler_phi(n);
        let phi_q = euler_phi(q);
        debug_assert_eq!(phi_n % phi_q, 0, "φ(n/g) must divide φ(n)");
        let value = (phi_n / phi_q) as i64 * moebius(q);
        debug_assert!(value.unsigned_abs() <= phi_n);
        RamanujanValue { s, n, value }
    }
}

/// Convenience wrapper returning just the integer value of [`RamanujanValue`].
pub fn ramanujan_sum(s: u64, n: u64) -> i64 {
    RamanujanValue::new(s, n).value
}
