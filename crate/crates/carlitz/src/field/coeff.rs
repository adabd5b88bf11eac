//! The coefficient-field contract.
//!
//! Twisted polynomials and skew series are generic over any field that can
//! embed the constants `k` and apply the `q`-power Frobenius. Negative
//! Frobenius powers (`q`-th roots) are allowed to fail: rational functions
//! and tower elements are not perfect, and the algorithms are arranged so
//! they never ask.

use crate::error::Result;
use crate::field::fq::{ExtField, FieldElem};

pub trait Coefficient: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    /// Field descriptor; cheap to clone.
    type Ctx: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    /// Size of the constant field `k` (the `q` in `tau a = a^q tau`).
    fn base_q(ctx: &Self::Ctx) -> u64;
    /// Embed a constant from `k`.
    fn from_k(ctx: &Self::Ctx, c: &FieldElem) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Result<Self>;
    /// `x -> x^(q^j)`; may fail for `j < 0` (imperfect fields) or when a
    /// perfection budget is exhausted.
    fn frobenius(&self, ctx: &Self::Ctx, j: i64) -> Result<Self>;
}

impl Coefficient for FieldElem {
    type Ctx = ExtField;

    fn zero(ctx: &Self::Ctx) -> Self {
        FieldElem::zero(ctx.field())
    }

    fn one(ctx: &Self::Ctx) -> Self {
        FieldElem::one(ctx.field())
    }

    fn base_q(ctx: &Self::Ctx) -> u64 {
        ctx.q()
    }

    fn from_k(ctx: &Self::Ctx, c: &FieldElem) -> Self {
        ctx.embed_k(c)
    }

    fn is_zero(&self) -> bool {
        FieldElem::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        FieldElem::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        FieldElem::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        FieldElem::mul(self, rhs)
    }

    fn inv(&self) -> Result<Self> {
        FieldElem::inv(self)
    }

    fn frobenius(&self, ctx: &Self::Ctx, j: i64) -> Result<Self> {
        Ok(ctx.frobenius(self, j))
    }
}
