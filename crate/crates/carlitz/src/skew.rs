//! The twisted polynomial ring `L[tau]` and truncated skew Laurent series
//! `L((tau^-1))`.
//!
//! Multiplication obeys `tau a = a^q tau`; in the Laurent ring also
//! `tau^-1 a = a^(1/q) tau^-1`, which is why series coefficients must come
//! from a perfect field whenever negative exponents act. Series carry an
//! explicit `known_down_to` exponent instead of a global truncation order,
//! so every operation accounts for exactly how far its result is valid.

use crate::error::{Error, Result};
use crate::field::Coefficient;

// ---- twisted polynomials ----------------------------------------------------

/// `sum c_i tau^i` with `c_i` in the coefficient field.
#[derive(Clone, PartialEq, Eq)]
pub struct TwistedPoly<C: Coefficient> {
    ctx: C::Ctx,
    c: Vec<C>, // little-endian in tau, no trailing zeros
}

impl<C: Coefficient> std::fmt::Debug for TwistedPoly<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})tau^{i}")?;
        }
        Ok(())
    }
}

impl<C: Coefficient> TwistedPoly<C> {
    pub fn zero(ctx: &C::Ctx) -> Self {
        TwistedPoly {
            ctx: ctx.clone(),
            c: Vec::new(),
        }
    }

    pub fn one(ctx: &C::Ctx) -> Self {
        TwistedPoly::constant(ctx, C::one(ctx))
    }

    pub fn tau(ctx: &C::Ctx) -> Self {
        TwistedPoly::from_coeffs(ctx, vec![C::zero(ctx), C::one(ctx)])
    }

    pub fn tau_pow(ctx: &C::Ctx, e: usize) -> Self {
        let mut c = vec![C::zero(ctx); e + 1];
        c[e] = C::one(ctx);
        TwistedPoly::from_coeffs(ctx, c)
    }

    pub fn constant(ctx: &C::Ctx, c: C) -> Self {
        TwistedPoly::from_coeffs(ctx, vec![c])
    }

    pub fn from_coeffs(ctx: &C::Ctx, mut c: Vec<C>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        TwistedPoly {
            ctx: ctx.clone(),
            c,
        }
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> C {
        self.c.get(i).cloned().unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> C {
        self.c.last().cloned().unwrap_or_else(|| C::zero(&self.ctx))
    }

    /// The constant term, i.e. the ring homomorphism `d: L[tau] -> L`.
    pub fn const_term(&self) -> C {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|x| *x == C::one(&self.ctx))
    }

    fn same_ctx(&self, rhs: &Self) {
        assert!(self.ctx == rhs.ctx, "coefficient field mismatch");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.same_ctx(rhs);
        let n = self.c.len().max(rhs.c.len());
        let out = (0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect();
        TwistedPoly::from_coeffs(&self.ctx, out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.same_ctx(rhs);
        let n = self.c.len().max(rhs.c.len());
        let out = (0..n).map(|i| self.coeff(i).sub(&rhs.coeff(i))).collect();
        TwistedPoly::from_coeffs(&self.ctx, out)
    }

    pub fn neg(&self) -> Self {
        let zero = C::zero(&self.ctx);
        TwistedPoly::from_coeffs(&self.ctx, self.c.iter().map(|x| zero.sub(x)).collect())
    }

    /// Left multiplication by a plain coefficient.
    pub fn scale_left(&self, c: &C) -> Self {
        TwistedPoly::from_coeffs(&self.ctx, self.c.iter().map(|x| c.mul(x)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.same_ctx(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Ok(TwistedPoly::zero(&self.ctx));
        }
        let mut out = vec![C::zero(&self.ctx); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                // tau^i b = b^(q^i) tau^i
                let tw = b.frobenius(&self.ctx, i as i64)?;
                out[i + j] = out[i + j].add(&a.mul(&tw));
            }
        }
        Ok(TwistedPoly::from_coeffs(&self.ctx, out))
    }

    /// Left-normalize to a monic polynomial.
    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() || self.is_monic() {
            return Ok(self.clone());
        }
        Ok(self.scale_left(&self.lc().inv()?))
    }

    /// Right division: `self = quot * rhs + rem` with `deg rem < deg rhs`.
    pub fn right_divmod(&self, rhs: &Self) -> Result<(Self, Self)> {
        self.same_ctx(rhs);
        if rhs.is_zero() {
            return Err(Error::arithmetic("twisted division by zero"));
        }
        let db = rhs.deg().unwrap();
        let mut rem = self.clone();
        let mut quot = TwistedPoly::zero(&self.ctx);
        while let Some(da) = rem.deg() {
            if da < db {
                break;
            }
            let shift = da - db;
            // c * lc(rhs)^(q^shift) = lc(rem)
            let denom = rhs.lc().frobenius(&self.ctx, shift as i64)?;
            let c = rem.lc().mul(&denom.inv()?);
            let mut term = vec![C::zero(&self.ctx); shift + 1];
            term[shift] = c;
            let term = TwistedPoly::from_coeffs(&self.ctx, term);
            quot = quot.add(&term);
            rem = rem.sub(&term.mul(rhs)?);
        }
        Ok((quot, rem))
    }

    /// Evaluate as the additive map `x -> sum c_i x^(q^i)`.
    pub fn eval(&self, x: &C) -> Result<C> {
        let mut acc = C::zero(&self.ctx);
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&c.mul(&x.frobenius(&self.ctx, i as i64)?));
        }
        Ok(acc)
    }

    /// Map coefficients into another coefficient field.
    pub fn map_coeffs<D: Coefficient>(
        &self,
        ctx: &D::Ctx,
        f: impl Fn(&C) -> Result<D>,
    ) -> Result<TwistedPoly<D>> {
        let c = self.c.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(TwistedPoly::from_coeffs(ctx, c))
    }
}

/// Monic generator of the left ideal `sum L[tau] g_i`, by iterated right
/// gcd (all left ideals of `L[tau]` are principal).
pub fn left_ideal_generator<C: Coefficient>(gens: &[TwistedPoly<C>]) -> Result<TwistedPoly<C>> {
    let mut acc: Option<TwistedPoly<C>> = None;
    for g in gens {
        if g.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => g.clone(),
            Some(a) => right_gcd(&a, g)?,
        });
    }
    acc.ok_or_else(|| Error::usage("left ideal needs a nonzero generator"))?
        .monic()
}

fn right_gcd<C: Coefficient>(a: &TwistedPoly<C>, b: &TwistedPoly<C>) -> Result<TwistedPoly<C>> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.right_divmod(&b)?.1;
        a = b;
        b = r;
    }
    Ok(a)
}

// ---- skew Laurent series -----------------------------------------------------

/// Truncated `sum c_i tau^i`: coefficients for exponents `top, top-1, ...`
/// down to `known_down_to`; everything below is unknown. `known_down_to =
/// None` marks an exact (polynomial-like) series.
#[derive(Clone)]
pub struct SkewSeries<C: Coefficient> {
    ctx: C::Ctx,
    top: i64,
    coeffs: Vec<C>, // index i holds exponent top - i; empty = no nonzero known terms
    kd: Option<i64>,
}

impl<C: Coefficient> std::fmt::Debug for SkewSeries<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})tau^{}", self.top - i as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        match self.kd {
            Some(kd) => write!(f, " + O(tau^{})", kd - 1),
            None => Ok(()),
        }
    }
}

impl<C: Coefficient> PartialEq for SkewSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.kd != other.kd || self.leading_exp() != other.leading_exp() {
            return false;
        }
        match self.leading_exp() {
            None => true,
            Some(top) => {
                let low = match self.kd {
                    Some(kd) => kd,
                    None => self
                        .low_exp()
                        .unwrap()
                        .min(other.low_exp().unwrap_or(top)),
                };
                (low..=top).all(|e| self.known_coeff(e) == other.known_coeff(e))
            }
        }
    }
}
impl<C: Coefficient> Eq for SkewSeries<C> {}

impl<C: Coefficient> SkewSeries<C> {
    /// Exact zero.
    pub fn zero(ctx: &C::Ctx) -> Self {
        SkewSeries {
            ctx: ctx.clone(),
            top: 0,
            coeffs: Vec::new(),
            kd: None,
        }
    }

    /// Zero to precision: all coefficients at exponents `>= known_down_to`
    /// vanish, lower ones are unknown.
    pub fn zero_to(ctx: &C::Ctx, known_down_to: i64) -> Self {
        SkewSeries {
            ctx: ctx.clone(),
            top: 0,
            coeffs: Vec::new(),
            kd: Some(known_down_to),
        }
    }

    pub fn from_twisted(f: &TwistedPoly<C>) -> Self {
        let ctx = f.ctx().clone();
        match f.deg() {
            None => SkewSeries::zero(&ctx),
            Some(d) => {
                let coeffs = (0..=d).rev().map(|i| f.coeff(i)).collect();
                SkewSeries {
                    ctx,
                    top: d as i64,
                    coeffs,
                    kd: None,
                }
            }
        }
    }

    pub fn tau_pow(ctx: &C::Ctx, e: i64) -> Self {
        SkewSeries {
            ctx: ctx.clone(),
            top: e,
            coeffs: vec![C::one(ctx)],
            kd: None,
        }
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.first().is_some_and(|c| c.is_zero()) {
            self.coeffs.remove(0);
            self.top -= 1;
        }
        if self.kd.is_none() {
            while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
        }
        self
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    /// Exponent of the leading nonzero term.
    pub fn leading_exp(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.top - i as i64)
    }

    fn low_exp(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.top - (self.coeffs.len() as i64 - 1))
    }

    /// `ord_{tau^-1} = -(largest exponent with nonzero coefficient)`.
    pub fn ord_tau_inv(&self) -> Option<i64> {
        self.leading_exp().map(|e| -e)
    }

    pub fn leading_coeff(&self) -> Option<C> {
        self.coeffs.iter().find(|c| !c.is_zero()).cloned()
    }

    pub fn known_down_to(&self) -> Option<i64> {
        self.kd
    }

    /// Relative precision: number of valid terms from the leading exponent
    /// down; `None` for exact series.
    pub fn precision(&self) -> Option<i64> {
        match (self.leading_exp(), self.kd) {
            (Some(top), Some(kd)) => Some(top - kd + 1),
            _ => None,
        }
    }

    /// Coefficient at exponent `e` when it is known.
    pub fn known_coeff(&self, e: i64) -> Option<C> {
        if let Some(kd) = self.kd {
            if e < kd {
                return None;
            }
        }
        if self.coeffs.is_empty() || e > self.top {
            return Some(C::zero(&self.ctx));
        }
        let idx = self.top - e;
        if idx < self.coeffs.len() as i64 {
            Some(self.coeffs[idx as usize].clone())
        } else {
            Some(C::zero(&self.ctx))
        }
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero_to_known(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Forget coefficients below `kd`.
    pub fn truncate_known(&self, kd: i64) -> Self {
        let new_kd = match self.kd {
            Some(old) => old.max(kd),
            None => kd,
        };
        let mut out = self.clone();
        out.kd = Some(new_kd);
        if let Some(low) = out.low_exp() {
            if low < new_kd {
                out.coeffs.truncate((out.top - new_kd + 1).max(0) as usize);
            }
        }
        out.normalized()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.binadd(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.binadd(rhs, true)
    }

    fn binadd(&self, rhs: &Self, negate: bool) -> Self {
        assert!(self.ctx == rhs.ctx, "coefficient field mismatch");
        let kd = match (self.kd, rhs.kd) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.max(b)),
        };
        let top = match (self.leading_exp(), rhs.leading_exp()) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => {
                return SkewSeries {
                    ctx: self.ctx.clone(),
                    top: 0,
                    coeffs: Vec::new(),
                    kd,
                };
            }
        };
        let low = match kd {
            Some(kd) => kd,
            None => self
                .low_exp()
                .unwrap_or(top)
                .min(rhs.low_exp().unwrap_or(top)),
        };
        let mut coeffs = Vec::with_capacity((top - low + 1).max(0) as usize);
        for e in (low..=top).rev() {
            let a = self.known_coeff(e).expect("within known range");
            let b = rhs.known_coeff(e).expect("within known range");
            coeffs.push(if negate { a.sub(&b) } else { a.add(&b) });
        }
        SkewSeries {
            ctx: self.ctx.clone(),
            top,
            coeffs,
            kd,
        }
        .normalized()
    }

    /// Skew product; negative exponents twist coefficients by `q`-th roots,
    /// so the coefficient field must support them wherever demanded.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        assert!(self.ctx == rhs.ctx, "coefficient field mismatch");
        let lead_a = self.leading_exp();
        let lead_b = rhs.leading_exp();
        // first unknown exponent (None = minus infinity)
        let ua = self.kd.map(|k| k - 1);
        let ub = rhs.kd.map(|k| k - 1);
        let sum = |x: Option<i64>, y: Option<i64>| -> Option<i64> {
            match (x, y) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            }
        };
        let first_unknown = [sum(ua, lead_b), sum(ub, lead_a), sum(ua, ub)]
            .into_iter()
            .flatten()
            .max();
        let kd = first_unknown.map(|u| u + 1);
        let (Some(la), Some(lb)) = (lead_a, lead_b) else {
            // no nonzero known terms in one factor
            return Ok(SkewSeries {
                ctx: self.ctx.clone(),
                top: 0,
                coeffs: Vec::new(),
                kd,
            });
        };
        let top = la + lb;
        let low = match kd {
            Some(kd) => kd,
            None => self.low_exp().unwrap() + rhs.low_exp().unwrap(),
        };
        let i_lo = self.low_exp().unwrap();
        let mut coeffs = Vec::with_capacity((top - low + 1).max(0) as usize);
        for s in (low..=top).rev() {
            let mut acc = C::zero(&self.ctx);
            for i in i_lo..=la {
                let a = self.known_coeff(i).expect("within window");
                if a.is_zero() {
                    continue;
                }
                let j = s - i;
                let b = rhs
                    .known_coeff(j)
                    .expect("precision accounting admits only known terms");
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&b.frobenius(&self.ctx, i)?));
            }
            coeffs.push(acc);
        }
        Ok(SkewSeries {
            ctx: self.ctx.clone(),
            top,
            coeffs,
            kd,
        }
        .normalized())
    }

    pub fn mul_poly_left(&self, f: &TwistedPoly<C>) -> Result<Self> {
        SkewSeries::from_twisted(f).mul(self)
    }

    pub fn mul_poly_right(&self, f: &TwistedPoly<C>) -> Result<Self> {
        self.mul(&SkewSeries::from_twisted(f))
    }

    /// Two-sided inverse to `prec` terms; the leading coefficient must be a
    /// unit and the coefficient field perfect along the way.
    pub fn inv(&self, prec: i64) -> Result<Self> {
        let Some(la) = self.leading_exp() else {
            return Err(Error::arithmetic("inverse of zero series"));
        };
        assert!(prec >= 1);
        let eff_prec = match self.precision() {
            Some(p) => p.min(prec),
            None => prec,
        };
        let lead = self.known_coeff(la).unwrap();
        let lead_inv = lead.inv()?;
        let mut out: Vec<C> = Vec::with_capacity(eff_prec as usize);
        // b has top exponent -la; solve (self * b)_s = delta_(s,0) downward
        for step in 0..eff_prec {
            let s = -step;
            let mut rhs = if s == 0 {
                C::one(&self.ctx)
            } else {
                C::zero(&self.ctx)
            };
            for (ai_idx, a) in self.coeffs.iter().enumerate().skip(1) {
                let i = la - ai_idx as i64;
                if a.is_zero() {
                    continue;
                }
                let j = s - i; // exponent of the b-term hit by a_i
                let b_idx = -la - j;
                if b_idx < 0 || b_idx as usize >= out.len() {
                    continue;
                }
                let b = &out[b_idx as usize];
                if b.is_zero() {
                    continue;
                }
                rhs = rhs.sub(&a.mul(&b.frobenius(&self.ctx, i)?));
            }
            // lead * frob(b_new, la) = rhs
            let val = lead_inv.mul(&rhs);
            out.push(val.frobenius(&self.ctx, -la)?);
        }
        Ok(SkewSeries {
            ctx: self.ctx.clone(),
            top: -la,
            coeffs: out,
            kd: Some(-la - eff_prec + 1),
        }
        .normalized())
    }

    pub fn eq_to_precision(&self, rhs: &Self, down_to: i64) -> bool {
        let top = match (self.leading_exp(), rhs.leading_exp()) {
            (None, None) => return true,
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
        };
        (down_to..=top).all(|e| match (self.known_coeff(e), rhs.known_coeff(e)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ExtField, FieldElem, FqConfig, PerfCtx, PerfectedRational};
    use crate::polya::{PolyA, RatFunc};
    use crate::rng::SplitMix64;
    use std::sync::Arc;

    fn k3() -> Arc<FqConfig> {
        FqConfig::canonical(3, 1)
    }

    fn rf(k: &Arc<FqConfig>, ints: &[i64]) -> RatFunc {
        RatFunc::from_poly(PolyA::from_ints(k, ints))
    }

    fn sample_tw(rng: &mut SplitMix64, ext: &ExtField, deg: usize) -> TwistedPoly<FieldElem> {
        let size = (ext.field().p() as u128).pow(ext.field().deg() as u32);
        let coeffs = (0..=deg)
            .map(|_| FieldElem::from_code(ext.field(), rng.next_u64() as u128 % size))
            .collect();
        TwistedPoly::from_coeffs(ext, coeffs)
    }

    #[test]
    fn commutation_rule() {
        // tau * a = a^q tau over k(t): a = t gives tau t = t^3 tau (q = 3)
        let k = k3();
        let tau = TwistedPoly::<RatFunc>::tau(&k);
        let a = TwistedPoly::constant(&k, RatFunc::t(&k));
        let prod = tau.mul(&a).unwrap();
        assert_eq!(prod.coeff(1), rf(&k, &[0, 0, 0, 1]));
        assert!(prod.coeff(0).is_zero());
    }

    #[test]
    fn square_of_t_plus_tau() {
        // (t + tau)^2 = t^2 + (t + t^q) tau + tau^2
        let k = k3();
        let f = TwistedPoly::from_coeffs(&k, vec![RatFunc::t(&k), RatFunc::one(&k)]);
        let sq = f.mul(&f).unwrap();
        assert_eq!(sq.coeff(0), rf(&k, &[0, 0, 1]));
        assert_eq!(sq.coeff(1), rf(&k, &[0, 1, 0, 1]));
        assert!(sq.coeff(2) == RatFunc::one(&k));
        assert_eq!(sq.deg(), Some(2));
        // cross-check as maps at 20 random points
        let mut rng = SplitMix64::new(21);
        for _ in 0..20 {
            let x = RatFunc::sample_nonzero(&mut rng, &k, 2);
            let via_poly = sq.eval(&x).unwrap();
            let via_composition = f.eval(&f.eval(&x).unwrap()).unwrap();
            assert_eq!(via_poly, via_composition);
        }
    }

    #[test]
    fn one_is_identity() {
        let k = k3();
        let one = TwistedPoly::<RatFunc>::one(&k);
        let f =
            TwistedPoly::from_coeffs(&k, vec![rf(&k, &[1, 2]), rf(&k, &[0, 1]), RatFunc::one(&k)]);
        assert_eq!(one.mul(&f).unwrap(), f);
        assert_eq!(f.mul(&one).unwrap(), f);
    }

    #[test]
    fn degree_and_const_term_multiplicative() {
        let ext = ExtField::new(&k3(), 2);
        let mut rng = SplitMix64::new(33);
        for _ in 0..30 {
            let da = 1 + rng.below(3) as usize;
            let db = 1 + rng.below(3) as usize;
            let a = sample_tw(&mut rng, &ext, da);
            let b = sample_tw(&mut rng, &ext, db);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab.deg(), Some(a.deg().unwrap() + b.deg().unwrap()));
            assert_eq!(ab.const_term(), a.const_term().mul(&b.const_term()));
        }
    }

    #[test]
    fn associativity_random() {
        let ext = ExtField::new(&k3(), 2);
        let mut rng = SplitMix64::new(55);
        for _ in 0..100 {
            let (da, db, dc) = (
                rng.below(3) as usize,
                rng.below(3) as usize,
                rng.below(3) as usize,
            );
            let a = sample_tw(&mut rng, &ext, da);
            let b = sample_tw(&mut rng, &ext, db);
            let c = sample_tw(&mut rng, &ext, dc);
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn right_division_reconstructs() {
        let ext = ExtField::new(&k3(), 2);
        let mut rng = SplitMix64::new(66);
        for _ in 0..50 {
            let df = rng.below(5) as usize;
            let dg = 1 + rng.below(3) as usize;
            let f = sample_tw(&mut rng, &ext, df);
            let g = sample_tw(&mut rng, &ext, dg);
            if g.is_zero() {
                continue;
            }
            let (q, r) = f.right_divmod(&g).unwrap();
            assert_eq!(q.mul(&g).unwrap().add(&r), f);
            assert!(r.deg().map_or(true, |dr| dr < g.deg().unwrap()));
        }
    }

    #[test]
    fn eval_examples() {
        let ext = ExtField::base_field(&k3());
        let kf = ext.field().clone();
        // tau(x) = x^q
        let tau = TwistedPoly::<FieldElem>::tau(&ext);
        let two = FieldElem::from_int(&kf, 2);
        assert_eq!(tau.eval(&two).unwrap(), two.pow(3));
        // linearized polys kill zero
        let f = TwistedPoly::from_coeffs(&ext, vec![FieldElem::from_int(&kf, 1), two.clone()]);
        assert!(f.eval(&FieldElem::zero(&kf)).unwrap().is_zero());
        // q=3: 2X + X^3 as 2 + tau evaluates to 0 at 1
        let g = TwistedPoly::from_coeffs(&ext, vec![two.clone(), FieldElem::one(&kf)]);
        assert!(g.eval(&FieldElem::one(&kf)).unwrap().is_zero());
    }

    #[test]
    fn eval_composition_law() {
        let ext = ExtField::new(&k3(), 2);
        let mut rng = SplitMix64::new(77);
        for _ in 0..50 {
            let (da, db) = (rng.below(3) as usize, rng.below(3) as usize);
            let a = sample_tw(&mut rng, &ext, da);
            let b = sample_tw(&mut rng, &ext, db);
            let x = FieldElem::from_code(ext.field(), rng.below(9) as u128);
            let lhs = a.mul(&b).unwrap().eval(&x).unwrap();
            let rhs = a.eval(&b.eval(&x).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn left_ideal_examples() {
        let k = k3();
        // principal input: monic normalization
        let f = TwistedPoly::from_coeffs(&k, vec![rf(&k, &[0, 1]), rf(&k, &[2])]);
        let g = left_ideal_generator(&[f.clone()]).unwrap();
        assert!(g.is_monic());
        assert_eq!(g, f.monic().unwrap());
        // {tau f, f} generates the same ideal as f
        let tauf = TwistedPoly::<RatFunc>::tau(&k).mul(&f).unwrap();
        let g2 = left_ideal_generator(&[tauf, f.clone()]).unwrap();
        assert_eq!(g2, f.monic().unwrap());
        // all-zero input is a usage error
        assert!(left_ideal_generator(&[TwistedPoly::<RatFunc>::zero(&k)]).is_err());
    }

    #[test]
    fn skew_series_commutation_with_negative_exponent() {
        // tau^-1 a = a^(1/q) tau^-1 over GF(9)
        let ext = ExtField::new(&k3(), 2);
        let a = FieldElem::gen(ext.field());
        let tau_inv = SkewSeries::<FieldElem>::tau_pow(&ext, -1);
        let a_series = SkewSeries::from_twisted(&TwistedPoly::constant(&ext, a.clone()));
        let prod = tau_inv.mul(&a_series).unwrap();
        assert_eq!(prod.leading_exp(), Some(-1));
        assert_eq!(prod.known_coeff(-1).unwrap(), ext.frobenius(&a, -1));
        // over the perfected rationals with a = t
        let pctx = PerfCtx::new(&k3(), 8);
        let t = PerfectedRational::t(&pctx);
        let tau_inv = SkewSeries::<PerfectedRational>::tau_pow(&pctx, -1);
        let t_series = SkewSeries::from_twisted(&TwistedPoly::constant(&pctx, t.clone()));
        let prod = tau_inv.mul(&t_series).unwrap();
        assert_eq!(prod.known_coeff(-1).unwrap(), t.frobenius(-1).unwrap());
    }

    #[test]
    fn series_mul_identity_and_ord() {
        let pctx = PerfCtx::new(&k3(), 8);
        let one = SkewSeries::<PerfectedRational>::tau_pow(&pctx, 0);
        let mut rng = SplitMix64::new(3);
        for _ in 0..100 {
            let e1 = rng.range_i64(-3, 3);
            let e2 = rng.range_i64(-3, 3);
            let c1 = PerfectedRational::t(&pctx).add(&PerfectedRational::one(&pctx));
            let a = SkewSeries::from_twisted(&TwistedPoly::constant(&pctx, c1))
                .mul(&SkewSeries::tau_pow(&pctx, e1))
                .unwrap();
            let b = SkewSeries::tau_pow(&pctx, e2);
            assert_eq!(a.mul(&one).unwrap(), a);
            let ab = a.mul(&b).unwrap();
            assert_eq!(
                ab.ord_tau_inv().unwrap(),
                a.ord_tau_inv().unwrap() + b.ord_tau_inv().unwrap()
            );
        }
    }

    #[test]
    fn series_inverse_tau() {
        let pctx = PerfCtx::new(&k3(), 8);
        let tau_inv = SkewSeries::<PerfectedRational>::tau_pow(&pctx, -1);
        let inv = tau_inv.inv(4).unwrap();
        assert_eq!(inv.leading_exp(), Some(1));
        assert!(inv.known_coeff(1).unwrap() == PerfectedRational::one(&pctx));
    }

    #[test]
    fn series_inverse_of_one_plus_a_tau_inv() {
        // ss_inv(1 + a tau^-1) = 1 - a tau^-1 + a^(1+1/q) tau^-2 - ...
        let ext = ExtField::new(&k3(), 2);
        let a = FieldElem::gen(ext.field());
        let f = SkewSeries::<FieldElem>::tau_pow(&ext, 0).add(
            &SkewSeries::from_twisted(&TwistedPoly::constant(&ext, a.clone()))
                .mul(&SkewSeries::tau_pow(&ext, -1))
                .unwrap(),
        );
        let inv = f.inv(3).unwrap();
        assert_eq!(inv.known_coeff(-1).unwrap(), a.neg());
        let expect2 = a.mul(&ext.frobenius(&a, -1));
        assert_eq!(inv.known_coeff(-2).unwrap(), expect2);
        // multiply back: equal to 1 to precision 3
        let prod = f.mul(&inv).unwrap();
        assert!(prod.eq_to_precision(&SkewSeries::tau_pow(&ext, 0), -2));
    }

    #[test]
    fn series_inverse_of_t_plus_tau_has_ord_one() {
        let pctx = PerfCtx::new(&k3(), 8);
        let phi_t = TwistedPoly::from_coeffs(
            &pctx,
            vec![PerfectedRational::t(&pctx), PerfectedRational::one(&pctx)],
        );
        let inv = SkewSeries::from_twisted(&phi_t).inv(5).unwrap();
        assert_eq!(inv.ord_tau_inv(), Some(1));
        let prod = SkewSeries::from_twisted(&phi_t).mul(&inv).unwrap();
        assert!(prod.eq_to_precision(&SkewSeries::tau_pow(&pctx, 0), -3));
    }

    #[test]
    fn precision_law_truncate_then_multiply() {
        let ext = ExtField::new(&k3(), 2);
        let mut rng = SplitMix64::new(44);
        for _ in 0..50 {
            let a = sample_tw(&mut rng, &ext, 2);
            let b = sample_tw(&mut rng, &ext, 2);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let sa = SkewSeries::from_twisted(&a).truncate_known(0);
            let sb = SkewSeries::from_twisted(&b).truncate_known(0);
            let full = SkewSeries::from_twisted(&a)
                .mul(&SkewSeries::from_twisted(&b))
                .unwrap();
            let trunc = sa.mul(&sb).unwrap();
            // truncate-then-multiply agrees with multiply-then-truncate
            let kd = trunc.known_down_to().unwrap();
            assert_eq!(full.truncate_known(kd), trunc);
            // and the precision never exceeds the inputs'
            let pa = sa.precision().unwrap();
            let pb = sb.precision().unwrap();
            if let Some(pt) = trunc.precision() {
                assert!(pt <= pa.min(pb));
            }
        }
    }

    #[test]
    fn series_associativity() {
        let ext = ExtField::new(&k3(), 2);
        let mut rng = SplitMix64::new(99);
        for _ in 0..100 {
            let mut mk = |rng: &mut SplitMix64| {
                let deg = rng.below(3) as usize;
                let poly = sample_tw(rng, &ext, deg);
                let shift = rng.range_i64(-2, 2);
                SkewSeries::from_twisted(&poly)
                    .mul(&SkewSeries::tau_pow(&ext, shift))
                    .unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let c = mk(&mut rng);
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
