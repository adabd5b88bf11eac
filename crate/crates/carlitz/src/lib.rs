//! Explicit class field theory for the rational function field `F = k(t)`
//! over a finite field `k` with `q` elements.
//!
//! The library computes, at finite level, both halves of the reciprocity map
//! for `F`:
//!
//! * the **torsion side**: the Carlitz module `phi_t = t + tau`, its torsion
//!   modules `phi[m]` realized in reductions modulo primes, and the character
//!   `chi_m` with values in `(A/m)^x` (see [`torsion`]);
//! * the **infinity-adic side**: the Artin-Schreier tower
//!   `a_i^q - a_i = -t a_{i-1}`, the series `u = sum a_i tau^{-i}` with
//!   `phi_t u = u tau`, and the representation `rho_infty` evaluated at
//!   Frobenius elements (see [`tower`]);
//!
//! and assembles them into ray class groups `C_F/U` for congruence subgroups
//! `U(m, e, d)`, verifying that the class of `Frob_p` computed through idele
//! reduction agrees with the class assembled from `(chi_m, rho_infty, deg)`
//! (see [`reciprocity`]).
//!
//! All arithmetic is exact: finite fields `GF(p^n)` with deterministic
//! lexicographically-minimal moduli, rational functions over `k`, truncated
//! skew Laurent series in `tau^{-1}` with explicit precision tracking, and
//! multivariate normal forms for the Artin-Schreier tower. Every random
//! stream is seeded, so runs are reproducible byte for byte.

pub mod drinfeld;
pub mod error;
pub mod field;
pub mod finf;
pub mod polya;
pub mod reciprocity;
pub mod rng;
pub mod skew;
pub mod torsion;
pub mod tower;

pub use error::{Error, Result};
pub use rng::SplitMix64;

/// Default seed for every pseudo-random stream in the crate (factorization
/// splitting, test sampling). Overridable through the CLI or `CARLITZ_SEED`.
pub const DEFAULT_SEED: u64 = 42;
