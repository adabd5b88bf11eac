//! The Carlitz module `phi_t = gamma(t) + tau` and its reductions.
//!
//! One generic type covers every instantiation used by the crate: the
//! module over `k(t)` (exact algebra: ideal action, isogenies), the module
//! over the perfected closure (Laurent expansions at infinity, the leading
//! coefficient map), its reductions modulo primes, and the copy with
//! Artin-Schreier tower coefficients used on the infinity-adic side.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::field::{Coefficient, FieldElem, PerfCtx, PerfectedRational};
use crate::polya::{PolyA, PrimeA, RatFunc};
use crate::skew::{left_ideal_generator, SkewSeries, TwistedPoly};

pub struct CarlitzModule<C: Coefficient> {
    ctx: C::Ctx,
    gamma_t: C,
    phi_t: TwistedPoly<C>,
    // phi(1/t) per precision; Laurent expansions reuse it heavily
    t_inv_cache: Mutex<HashMap<i64, SkewSeries<C>>>,
}

impl<C: Coefficient> CarlitzModule<C> {
    /// Rank-1 module with `phi_t = gamma(t) + tau`.
    pub fn with_gamma(ctx: C::Ctx, gamma_t: C) -> Self {
        let phi_t = TwistedPoly::from_coeffs(&ctx, vec![gamma_t.clone(), C::one(&ctx)]);
        CarlitzModule {
            ctx,
            gamma_t,
            phi_t,
            t_inv_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn gamma_t(&self) -> &C {
        &self.gamma_t
    }

    pub fn phi_t(&self) -> &TwistedPoly<C> {
        &self.phi_t
    }

    /// `gamma(a)` for `a` in `A`: evaluate at `gamma(t)`.
    pub fn gamma(&self, a: &PolyA) -> C {
        let mut acc = C::zero(&self.ctx);
        for c in a.coeffs().iter().rev() {
            acc = acc.mul(&self.gamma_t).add(&C::from_k(&self.ctx, c));
        }
        acc
    }

    /// `phi_a` by the Horner recursion `phi_(a' t + c) = phi_(a') phi_t + c`.
    pub fn phi_poly(&self, a: &PolyA) -> Result<TwistedPoly<C>> {
        let mut acc = TwistedPoly::zero(&self.ctx);
        for c in a.coeffs().iter().rev() {
            acc = acc.mul(&self.phi_t)?;
            acc = acc.add(&TwistedPoly::constant(
                &self.ctx,
                C::from_k(&self.ctx, c),
            ));
        }
        Ok(acc)
    }

    fn phi_t_inv(&self, prec: i64) -> Result<SkewSeries<C>> {
        let mut cache = self.t_inv_cache.lock().unwrap();
        if let Some(hit) = cache.get(&prec) {
            return Ok(hit.clone());
        }
        let inv = SkewSeries::from_twisted(&self.phi_t).inv(prec)?;
        cache.insert(prec, inv.clone());
        Ok(inv)
    }

    /// The extension of `phi` to `F_infty`, truncated: a Laurent series in
    /// `tau^-1` with `ord_{tau^-1}(phi_x) = ord_infty(x)`, valid to `prec`
    /// leading terms.
    pub fn phi_laurent(&self, x: &RatFunc, prec: i64) -> Result<SkewSeries<C>> {
        if x.is_zero() {
            return Err(Error::usage("phi of zero has no leading term"));
        }
        assert!(prec >= 1);
        let num_part = SkewSeries::from_twisted(&self.phi_poly(x.num())?);
        if x.den().is_one() {
            return Ok(num_part);
        }
        // pure t-powers go through the cached phi(1/t)
        let den = x.den();
        let is_tpow = den.coeffs()[..den.deg_or_zero()]
            .iter()
            .all(|c| c.is_zero());
        let den_inv = if is_tpow {
            let t_inv = self.phi_t_inv(prec)?;
            let mut acc = SkewSeries::tau_pow(&self.ctx, 0);
            for _ in 0..den.deg_or_zero() {
                acc = acc.mul(&t_inv)?;
            }
            acc
        } else {
            SkewSeries::from_twisted(&self.phi_poly(den)?).inv(prec)?
        };
        num_part.mul(&den_inv)
    }

    /// Leading-coefficient map: the first nonzero coefficient of the
    /// Laurent series `phi_x`.
    pub fn mu(&self, x: &RatFunc) -> Result<C> {
        if x.is_zero() {
            return Err(Error::usage("mu of zero"));
        }
        let series = self.phi_laurent(x, 1)?;
        series
            .leading_coeff()
            .ok_or_else(|| Error::invariant("phi_x has a leading term for nonzero x"))
    }

    /// The action of the principal ideal `(w)`, computed along two
    /// independent routes that must agree exactly: the monic generator of
    /// the left ideal spanned by `{phi_w, phi_(w t)}`, and the closed form
    /// `mu(w)^-1 phi_w`.
    pub fn ideal_action(&self, w: &PolyA) -> Result<IdealAction<C>> {
        if w.is_zero() {
            return Err(Error::usage("ideal action of the zero ideal"));
        }
        let phi_w = self.phi_poly(w)?;
        // deliberately redundant generating set {w, w t} to run the
        // Euclidean route on a nontrivial input
        let phi_wt = self.phi_poly(&w.mul(&PolyA::t(w.field())))?;
        let via_ideal = left_ideal_generator(&[phi_w.clone(), phi_wt])?;
        let mu_w = phi_w.lc();
        let via_formula = phi_w.scale_left(&mu_w.inv()?);
        if via_ideal != via_formula {
            return Err(Error::invariant(
                "left-ideal generator disagrees with mu(w)^-1 phi_w",
            ));
        }
        // (a*phi)_t = mu^-1 phi_t mu
        let mu_poly = TwistedPoly::constant(&self.ctx, mu_w.clone());
        let target_phi_t = TwistedPoly::constant(&self.ctx, mu_w.inv()?)
            .mul(&self.phi_t)?
            .mul(&mu_poly)?;
        let target = CarlitzModule::with_gamma(self.ctx.clone(), target_phi_t.const_term());
        if target.phi_t != target_phi_t {
            return Err(Error::invariant("target of the ideal action is not rank 1"));
        }
        Ok(IdealAction {
            isogeny: via_ideal,
            target,
            normalized_gen: w.monic(),
        })
    }
}

/// Result of `(w) * phi`: the monic isogeny, the target module, and the
/// generator normalized to sign 1.
pub struct IdealAction<C: Coefficient> {
    pub isogeny: TwistedPoly<C>,
    pub target: CarlitzModule<C>,
    pub normalized_gen: PolyA,
}

impl CarlitzModule<RatFunc> {
    /// The Carlitz module over `F = k(t)` with exact rational coefficients.
    pub fn generic_rational(k: &std::sync::Arc<crate::field::FqConfig>) -> Self {
        CarlitzModule::with_gamma(k.clone(), RatFunc::t(k))
    }

    /// Reduce modulo a prime: compose the coefficients with `r_p`. The
    /// Carlitz coefficients are `p`-integral for every finite prime.
    pub fn reduce_mod_p(&self, p: &PrimeA) -> Result<CarlitzModule<FieldElem>> {
        let rf = p.residue_field().clone();
        self.reduce_into(p, &rf.ext, &rf.t_bar)
    }

    /// Reduction into a caller-supplied residue realization.
    pub fn reduce_into(
        &self,
        p: &PrimeA,
        ext: &crate::field::ExtField,
        t_bar: &FieldElem,
    ) -> Result<CarlitzModule<FieldElem>> {
        let gamma = p.residue_embed_in(&self.gamma_t, ext, t_bar)?;
        Ok(CarlitzModule::with_gamma(ext.clone(), gamma))
    }

    /// Reduce a twisted polynomial with `k(t)` coefficients mod `p`.
    pub fn reduce_twisted(
        p: &PrimeA,
        ext: &crate::field::ExtField,
        t_bar: &FieldElem,
        f: &TwistedPoly<RatFunc>,
    ) -> Result<TwistedPoly<FieldElem>> {
        f.map_coeffs(ext, |c| p.residue_embed_in(c, ext, t_bar))
    }
}

impl CarlitzModule<PerfectedRational> {
    /// The Carlitz module with perfected-rational coefficients, for Laurent
    /// expansions at infinity.
    pub fn generic_perfected(k: &std::sync::Arc<crate::field::FqConfig>, budget: usize) -> Self {
        let ctx = PerfCtx::new(k, budget);
        CarlitzModule::with_gamma(ctx.clone(), PerfectedRational::t(&ctx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqConfig;
    use crate::polya::sign_epsilon;
    use crate::rng::SplitMix64;
    use std::sync::Arc;

    fn k3() -> Arc<FqConfig> {
        FqConfig::canonical(3, 1)
    }

    #[test]
    fn phi_t_and_phi_t_squared() {
        let k = k3();
        let m = CarlitzModule::generic_rational(&k);
        let phi_t = m.phi_poly(&PolyA::t(&k)).unwrap();
        assert_eq!(phi_t, *m.phi_t());
        assert_eq!(phi_t.coeff(0), RatFunc::t(&k));
        assert!(phi_t.coeff(1) == RatFunc::one(&k));
        // phi_(t^2) = t^2 + (t + t^q) tau + tau^2
        let phi_t2 = m.phi_poly(&PolyA::from_ints(&k, &[0, 0, 1])).unwrap();
        let expect = phi_t.mul(&phi_t).unwrap();
        assert_eq!(phi_t2, expect);
    }

    #[test]
    fn phi_is_a_ring_homomorphism() {
        let k = k3();
        let m = CarlitzModule::generic_rational(&k);
        let mut rng = SplitMix64::new(12);
        for _ in 0..100 {
            let (da, db) = (rng.below(4) as usize, rng.below(4) as usize);
            let a = PolyA::sample(&mut rng, &k, da, false);
            let b = PolyA::sample(&mut rng, &k, db, false);
            let sum = m.phi_poly(&a.add(&b)).unwrap();
            assert_eq!(sum, m.phi_poly(&a).unwrap().add(&m.phi_poly(&b).unwrap()));
            let prod = m.phi_poly(&a.mul(&b)).unwrap();
            assert_eq!(
                prod,
                m.phi_poly(&a).unwrap().mul(&m.phi_poly(&b).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn rank_one_degree_and_leading_coefficient() {
        let k = k3();
        let m = CarlitzModule::generic_rational(&k);
        let mut rng = SplitMix64::new(31);
        // exhaustive normalization check at small degrees
        for deg in 0..=5 {
            for _ in 0..10 {
                let a = PolyA::sample(&mut rng, &k, deg, false);
                let phi = m.phi_poly(&a).unwrap();
                assert_eq!(phi.deg(), Some(deg));
                assert_eq!(phi.lc(), RatFunc::from_poly(PolyA::constant(a.lc())));
                assert_eq!(phi.const_term(), m.gamma(&a));
            }
        }
    }

    #[test]
    fn laurent_of_t_inverse() {
        let k = k3();
        let m = CarlitzModule::generic_perfected(&k, 8);
        let x = RatFunc::t(&k).inv().unwrap();
        let s = m.phi_laurent(&x, 4).unwrap();
        assert_eq!(s.ord_tau_inv(), Some(1));
        // agrees with the directly inverted phi_t
        let direct = SkewSeries::from_twisted(m.phi_t()).inv(4).unwrap();
        assert_eq!(s, direct);
        // and phi of a polynomial embeds exactly
        let a = PolyA::from_ints(&k, &[1, 0, 2]);
        let sa = m.phi_laurent(&RatFunc::from_poly(a.clone()), 3).unwrap();
        assert_eq!(sa.ord_tau_inv(), Some(-2));
        assert_eq!(
            sa.known_coeff(2).unwrap().as_constant().unwrap(),
            FieldElem::from_int(&k, 2)
        );
    }

    #[test]
    fn rank_equation_on_random_elements() {
        let k = k3();
        let m = CarlitzModule::generic_perfected(&k, 8);
        let mut rng = SplitMix64::new(63);
        let mut seen = 0;
        while seen < 50 {
            let x = RatFunc::sample_nonzero(&mut rng, &k, 3);
            if !(-3..=3).contains(&x.ord_infty()) {
                continue;
            }
            seen += 1;
            let s = m.phi_laurent(&x, 2).unwrap();
            assert_eq!(s.ord_tau_inv(), Some(x.ord_infty()));
        }
    }

    #[test]
    fn mu_equals_sign() {
        let k = k3();
        let m = CarlitzModule::generic_perfected(&k, 8);
        // mu of a monic polynomial is 1
        let monic = RatFunc::from_poly(PolyA::from_ints(&k, &[2, 1, 1]));
        assert!(m.mu(&monic).unwrap().as_constant().unwrap().is_one());
        // q=3: mu(2t+1) = 2
        let f = RatFunc::from_poly(PolyA::from_ints(&k, &[1, 2]));
        assert_eq!(
            m.mu(&f).unwrap().as_constant().unwrap(),
            FieldElem::from_int(&k, 2)
        );
        // mu = sign for 50 random x
        let mut rng = SplitMix64::new(8);
        for _ in 0..50 {
            let x = RatFunc::sample_nonzero(&mut rng, &k, 3);
            assert_eq!(
                m.mu(&x).unwrap().as_constant().unwrap(),
                sign_epsilon(&x).unwrap()
            );
        }
    }

    #[test]
    fn sign_relation() {
        // mu(xy) = mu(x) * mu(y)^(1/q^(ord_infty(x))), applied literally
        let k = k3();
        let m = CarlitzModule::generic_perfected(&k, 8);
        let ext = crate::field::ExtField::base_field(&k);
        let mut rng = SplitMix64::new(88);
        for _ in 0..100 {
            let x = RatFunc::sample_nonzero(&mut rng, &k, 3);
            let y = RatFunc::sample_nonzero(&mut rng, &k, 3);
            let lhs = m.mu(&x.mul(&y)).unwrap().as_constant().unwrap();
            let mu_x = m.mu(&x).unwrap().as_constant().unwrap();
            let mu_y = m.mu(&y).unwrap().as_constant().unwrap();
            let twist = ext.frobenius(&mu_y, -x.ord_infty());
            assert_eq!(lhs, mu_x.mul(&twist));
        }
    }

    #[test]
    fn ideal_action_monic_and_scaled() {
        let k = k3();
        let m = CarlitzModule::generic_rational(&k);
        // monic w: phi_(w) itself, target phi
        let w = PolyA::from_ints(&k, &[1, 1]);
        let act = m.ideal_action(&w).unwrap();
        assert_eq!(act.isogeny, m.phi_poly(&w).unwrap());
        assert_eq!(act.target.phi_t(), m.phi_t());
        assert_eq!(act.normalized_gen, w);
        // w = 2t: both paths agree (checked internally), isogeny = phi_t
        let w = PolyA::from_ints(&k, &[0, 2]);
        let act = m.ideal_action(&w).unwrap();
        assert_eq!(act.isogeny, m.phi_poly(&PolyA::t(&k)).unwrap());
        assert!(m.ideal_action(&PolyA::zero(&k)).is_err());
    }

    #[test]
    fn isogeny_relation() {
        // phi_a phi_x = (a*phi)_x phi_a
        let k = k3();
        let m = CarlitzModule::generic_rational(&k);
        let mut rng = SplitMix64::new(41);
        for _ in 0..50 {
            let dw = rng.below(3) as usize;
            let dx = rng.below(3) as usize;
            let w = PolyA::sample(&mut rng, &k, dw, false);
            let x = PolyA::sample(&mut rng, &k, dx, false);
            if w.is_zero() {
                continue;
            }
            let act = m.ideal_action(&w).unwrap();
            let lhs = act.isogeny.mul(&m.phi_poly(&x).unwrap()).unwrap();
            let rhs = act.target.phi_poly(&x).unwrap().mul(&act.isogeny).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn ideal_action_multiplicativity() {
        // phi_(ab) = (b*phi)_a phi_b on random pairs
        let k = k3();
        let m = CarlitzModule::generic_rational(&k);
        let mut rng = SplitMix64::new(52);
        for _ in 0..20 {
            let da = 1 + rng.below(2) as usize;
            let db = 1 + rng.below(2) as usize;
            let a = PolyA::sample(&mut rng, &k, da, false);
            let b = PolyA::sample(&mut rng, &k, db, false);
            let act_b = m.ideal_action(&b).unwrap();
            let act_ab = m.ideal_action(&a.mul(&b)).unwrap();
            let act_a_on_target = act_b.target.ideal_action(&a).unwrap();
            let rhs = act_a_on_target.isogeny.mul(&act_b.isogeny).unwrap();
            assert_eq!(act_ab.isogeny, rhs);
        }
    }

    #[test]
    fn reduction_examples() {
        let k = k3();
        let m = CarlitzModule::generic_rational(&k);
        // q=3, p = t+1: reduced phi_t = 2 + tau over GF(3)
        let p = PrimeA::new(PolyA::from_ints(&k, &[1, 1])).unwrap();
        let red = m.reduce_mod_p(&p).unwrap();
        let rf = p.residue_field();
        assert_eq!(red.gamma_t(), &FieldElem::from_int(rf.ext.field(), 2));
        // r_p(phi_p) = tau^d for all small primes, q in {2, 3}
        for (pp, nn) in [(2u64, 1usize), (3, 1)] {
            let kk = FqConfig::canonical(pp, nn);
            let mm = CarlitzModule::generic_rational(&kk);
            for prime in crate::polya::primes_up_to(&kk, 3) {
                let red = mm.reduce_mod_p(&prime).unwrap();
                let phi_p = red.phi_poly(prime.poly()).unwrap();
                let d = prime.degree();
                let expect = TwistedPoly::tau_pow(red.ctx(), d);
                assert_eq!(phi_p, expect, "r_p(phi_p) = tau^d at {prime}");
            }
        }
    }

    #[test]
    fn reduction_commutes_with_phi() {
        let k = k3();
        let m = CarlitzModule::generic_rational(&k);
        let p = PrimeA::new(PolyA::from_ints(&k, &[1, 0, 1])).unwrap(); // t^2+1
        let red = m.reduce_mod_p(&p).unwrap();
        let rf = p.residue_field();
        let mut rng = SplitMix64::new(3);
        for _ in 0..50 {
            let deg = rng.below(4) as usize;
            let a = PolyA::sample(&mut rng, &k, deg, false);
            let direct = red.phi_poly(&a).unwrap();
            let mapped =
                CarlitzModule::reduce_twisted(&p, &rf.ext, &rf.t_bar, &m.phi_poly(&a).unwrap())
                    .unwrap();
            assert_eq!(direct, mapped);
        }
    }
}
