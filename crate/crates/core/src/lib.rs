//! Exact spectra and integrality of Cayley graphs over dihedral groups.
//!
//! A Cayley graph over the dihedral group `D_n` is described by a
//! [`group::ConnectionSet`]: rotation exponents `S₁` (closed under
//! negation) and reflection indices `S₂`. Its `2n` eigenvalues split into a
//! handful of linear-character values and `⌊(n−1)/2⌋` pairs
//! `(χ_h(S₁) ± √Δ_h)/2`, where every ingredient is a character sum over
//! `Z_n` — so both the spectrum and the question "are all eigenvalues
//! integers?" reduce to integer arithmetic with Ramanujan sums
//! ([`numtheory`]) over the gcd-atoms of `Z_n` ([`group`]).
//!
//! The crate keeps two independent roads to every answer:
//!
//! * the character route: [`spectra::spectrum`] for eigenvalues,
//!   [`integrality::check_integral`] for the integrality decision with a
//!   structured witness, [`integrality::classify_two_integral`] and
//!   [`integrality::dp_integral_sets`] for the structure of integral sets;
//! * the brute-force route ([`oracle`]): build the `2n × 2n` adjacency
//!   matrix, take its exact characteristic polynomial, and factor out
//!   integer roots — no character theory involved.
//!
//! [`census::run_census`] runs both on every connection set over a small
//! modulus and aborts on any disagreement, which keeps the two
//! implementations honest against each other.

pub mod census;
pub mod group;
pub mod integrality;
pub mod numtheory;
pub mod oracle;
pub mod spectra;

pub use group::{ConnectionSet, DihedralElement};
pub use integrality::{check_integral, IntegralityReport, Verdict};
pub use spectra::{spectrum, Mode, SpectrumReport};
