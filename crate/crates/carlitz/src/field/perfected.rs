//! The perfect closure of `k(t)` at finite truncation.
//!
//! An element at level `s` is a reduced fraction of polynomials in the
//! variable `t^(1/q^s)`. Raising to the `q`-th power renames the variable
//! down one level; extracting a `q`-th root renames it up one level, subject
//! to a configurable budget. Elements are kept at the minimal level at which
//! they are expressible, so equality is plain structural comparison.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::coeff::Coefficient;
use crate::field::fq::{FieldElem, FqConfig};
use crate::field::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfCtx {
    pub k: Arc<FqConfig>,
    /// Maximal admissible level; truncated skew series at precision `N`
    /// never need more than `N` root extractions.
    pub budget: usize,
}

impl PerfCtx {
    pub fn new(k: &Arc<FqConfig>, budget: usize) -> PerfCtx {
        PerfCtx {
            k: k.clone(),
            budget,
        }
    }

    pub fn q(&self) -> u64 {
        (self.k.p() as u128).pow(self.k.deg() as u32) as u64
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PerfectedRational {
    ctx: PerfCtx,
    level: usize,
    num: Poly,
    den: Poly, // monic, nonzero
}

impl std::fmt::Debug for PerfectedRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({:?})/({:?}) @level {}",
            self.num, self.den, self.level
        )
    }
}

impl PerfectedRational {
    pub fn zero(ctx: &PerfCtx) -> Self {
        PerfectedRational {
            ctx: ctx.clone(),
            level: 0,
            num: Poly::zero(&ctx.k),
            den: Poly::one(&ctx.k),
        }
    }

    pub fn one(ctx: &PerfCtx) -> Self {
        Self::from_constant(ctx, FieldElem::one(&ctx.k))
    }

    pub fn from_constant(ctx: &PerfCtx, c: FieldElem) -> Self {
        PerfectedRational {
            ctx: ctx.clone(),
            level: 0,
            num: Poly::constant(c),
            den: Poly::one(&ctx.k),
        }
    }

    /// The generator `t` at level 0.
    pub fn t(ctx: &PerfCtx) -> Self {
        PerfectedRational {
            ctx: ctx.clone(),
            level: 0,
            num: Poly::x(&ctx.k),
            den: Poly::one(&ctx.k),
        }
    }

    /// Level-0 embedding of an ordinary fraction `num/den` over `k[t]`.
    pub fn from_fraction(ctx: &PerfCtx, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::arithmetic("zero denominator"));
        }
        Ok(Self::build(ctx.clone(), 0, num, den))
    }

    fn build(ctx: PerfCtx, level: usize, num: Poly, den: Poly) -> Self {
        let mut out = PerfectedRational {
            ctx,
            level,
            num,
            den,
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.level = 0;
            self.den = Poly::one(&self.ctx.k);
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() != Some(0) {
            self.num = self.num.divmod(&g).unwrap().0;
            self.den = self.den.divmod(&g).unwrap().0;
        }
        let lc_inv = self.den.lc().inv().expect("nonzero denominator");
        self.den = self.den.scale(&lc_inv);
        self.num = self.num.scale(&lc_inv);
        self.compress_level();
    }

    fn compress_level(&mut self) {
        let q = self.ctx.q() as usize;
        while self.level > 0
            && poly_exponents_divisible(&self.num, q)
            && poly_exponents_divisible(&self.den, q)
        {
            self.num = poly_compress(&self.num, q);
            self.den = poly_compress(&self.den, q);
            self.level -= 1;
        }
    }

    pub fn ctx(&self) -> &PerfCtx {
        &self.ctx
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Level-0 elements convert losslessly back to an ordinary fraction.
    pub fn as_level0(&self) -> Option<(Poly, Poly)> {
        (self.level == 0).then(|| (self.num.clone(), self.den.clone()))
    }

    /// Constant elements (in `k`) convert back to a field element.
    pub fn as_constant(&self) -> Option<FieldElem> {
        if self.level == 0 && self.den.degree() == Some(0) && self.num.degree().map_or(true, |d| d == 0)
        {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    fn lift_to(&self, level: usize) -> (Poly, Poly) {
        assert!(level >= self.level);
        let q = self.ctx.q() as usize;
        let jump = q.pow((level - self.level) as u32);
        (poly_stretch(&self.num, jump), poly_stretch(&self.den, jump))
    }

    fn binop(&self, rhs: &Self, f: impl Fn(&Poly, &Poly, &Poly, &Poly) -> (Poly, Poly)) -> Self {
        assert_eq!(self.ctx, rhs.ctx, "perfected coefficient context mismatch");
        let level = self.level.max(rhs.level);
        let (an, ad) = self.lift_to(level);
        let (bn, bd) = rhs.lift_to(level);
        let (num, den) = f(&an, &ad, &bn, &bd);
        Self::build(self.ctx.clone(), level, num, den)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.binop(rhs, |an, ad, bn, bd| {
            (an.mul(bd).add(&bn.mul(ad)), ad.mul(bd))
        })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.binop(rhs, |an, ad, bn, bd| {
            (an.mul(bd).sub(&bn.mul(ad)), ad.mul(bd))
        })
    }

    pub fn neg(&self) -> Self {
        PerfectedRational {
            ctx: self.ctx.clone(),
            level: self.level,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.binop(rhs, |an, ad, bn, bd| (an.mul(bn), ad.mul(bd)))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::arithmetic("inverse of zero"));
        }
        Ok(Self::build(
            self.ctx.clone(),
            self.level,
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// `x -> x^(q^j)`. Negative `j` raises the level and is subject to the
    /// budget; positive `j` lowers the level (or substitutes `t -> t^q` at
    /// level 0). `(x^(1/q))^q = x` holds exactly.
    pub fn frobenius(&self, j: i64) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let q = self.ctx.q() as usize;
        let mut cur = self.clone();
        if j >= 0 {
            for _ in 0..j {
                if cur.level > 0 {
                    cur.level -= 1;
                } else {
                    cur.num = poly_stretch(&cur.num, q);
                    cur.den = poly_stretch(&cur.den, q);
                }
            }
            cur.compress_level();
            Ok(cur)
        } else {
            let up = (-j) as usize;
            // raising the level leaves coefficient vectors untouched
            let mut lifted = cur;
            lifted.level += up;
            lifted.compress_level();
            if lifted.level > lifted.ctx.budget {
                return Err(Error::precision(format!(
                    "perfection level {} exceeds budget {}",
                    lifted.level, lifted.ctx.budget
                )));
            }
            Ok(lifted)
        }
    }
}

fn poly_exponents_divisible(f: &Poly, q: usize) -> bool {
    f.coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| c.is_zero() || i % q == 0)
}

fn poly_compress(f: &Poly, q: usize) -> Poly {
    let mut out = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate() {
        if i % q == 0 {
            out.push(c.clone());
        }
    }
    Poly::from_coeffs(f.config(), out)
}

fn poly_stretch(f: &Poly, jump: usize) -> Poly {
    if f.is_zero() {
        return f.clone();
    }
    let mut out = vec![FieldElem::zero(f.config()); f.deg_or_zero() * jump + 1];
    for (i, c) in f.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out[i * jump] = c.clone();
        }
    }
    Poly::from_coeffs(f.config(), out)
}

impl Coefficient for PerfectedRational {
    type Ctx = PerfCtx;

    fn zero(ctx: &Self::Ctx) -> Self {
        PerfectedRational::zero(ctx)
    }

    fn one(ctx: &Self::Ctx) -> Self {
        PerfectedRational::one(ctx)
    }

    fn base_q(ctx: &Self::Ctx) -> u64 {
        ctx.q()
    }

    fn from_k(ctx: &Self::Ctx, c: &FieldElem) -> Self {
        PerfectedRational::from_constant(ctx, c.clone())
    }

    fn is_zero(&self) -> bool {
        PerfectedRational::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        PerfectedRational::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        PerfectedRational::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        PerfectedRational::mul(self, rhs)
    }

    fn inv(&self) -> Result<Self> {
        PerfectedRational::inv(self)
    }

    fn frobenius(&self, _ctx: &Self::Ctx, j: i64) -> Result<Self> {
        PerfectedRational::frobenius(self, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx3() -> PerfCtx {
        PerfCtx::new(&FqConfig::canonical(3, 1), 8)
    }

    #[test]
    fn qth_root_of_t_and_back() {
        let ctx = ctx3();
        let t = PerfectedRational::t(&ctx);
        let root = t.frobenius(-1).unwrap();
        assert_eq!(root.level(), 1);
        assert_eq!(root.frobenius(1).unwrap(), t);
        // (x^(1/q)) * (x^(1/q)) * (x^(1/q)) = x for q = 3
        assert_eq!(root.mul(&root).mul(&root), t);
    }

    #[test]
    fn root_products_multiply() {
        let ctx = ctx3();
        let mut rng = crate::SplitMix64::new(3);
        let k = &ctx.k;
        for _ in 0..100 {
            let fx = |rng: &mut crate::SplitMix64| {
                let deg = rng.below(3) as usize;
                let mut c: Vec<FieldElem> =
                    (0..=deg).map(|_| FieldElem::from_int(k, rng.below(3) as i64)).collect();
                c[deg] = FieldElem::from_int(k, 1 + rng.below(2) as i64);
                Poly::from_coeffs(k, c)
            };
            let x = PerfectedRational::from_fraction(&ctx, fx(&mut rng), Poly::one(k)).unwrap();
            let y = PerfectedRational::from_fraction(&ctx, fx(&mut rng), Poly::one(k)).unwrap();
            let lhs = x.frobenius(-1).unwrap().mul(&y.frobenius(-1).unwrap());
            let rhs = x.mul(&y).frobenius(-1).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = PerfCtx::new(&FqConfig::canonical(3, 1), 2);
        let t = PerfectedRational::t(&ctx);
        assert!(t.frobenius(-2).is_ok());
        assert!(matches!(t.frobenius(-3), Err(Error::Precision(_))));
    }

    #[test]
    fn level0_roundtrip() {
        let ctx = ctx3();
        let k = &ctx.k;
        let num = Poly::from_coeffs(
            k,
            vec![
                FieldElem::from_int(k, 1),
                FieldElem::from_int(k, 2),
                FieldElem::from_int(k, 1),
            ],
        );
        let den = Poly::x(k);
        let x = PerfectedRational::from_fraction(&ctx, num.clone(), den.clone()).unwrap();
        let (n2, d2) = x.as_level0().unwrap();
        assert_eq!((n2, d2), (num, den));
    }

    #[test]
    fn frobenius_is_multiplicative_at_level0() {
        let ctx = ctx3();
        let t = PerfectedRational::t(&ctx);
        let one = PerfectedRational::one(&ctx);
        let x = t.mul(&t).add(&one); // t^2 + 1
        let frob = x.frobenius(1).unwrap();
        // (t^2+1)^3 = t^6 + 1 + 3(...) = t^6 + 1 in char 3... expand directly
        let expect = x.mul(&x).mul(&x);
        assert_eq!(frob, expect);
    }
}
