//! Exact finite-field arithmetic and the coefficient-field contract.
//!
//! Fields `GF(p^N)` are represented as `GF(p)[X]` modulo a monic irreducible
//! polynomial. When a modulus is not supplied it is chosen deterministically:
//! the smallest monic irreducible of the right degree in lexicographic
//! coefficient order (constant term compared first). Element order, "first
//! root" choices and every other branch rule in the crate reduce to the same
//! lexicographic comparison of little-endian coefficient vectors, so element
//! encodings are reproducible across runs.

mod coeff;
mod fq;
pub mod linalg;
mod perfected;
pub mod poly;

pub use coeff::Coefficient;
pub use fq::{ff_arith, AsRoot, ExtField, FfOp, FieldElem, FqConfig};
pub use perfected::{PerfCtx, PerfectedRational};
