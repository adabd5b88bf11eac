//! Dense univariate polynomials over a finite field.
//!
//! Used both for `A = k[t]` (through the wrappers in `polya`) and for
//! ordinary polynomial work over big extension fields: distinct-degree
//! factorization of the torsion polynomials, root finding for residue
//! images, irreducibility tests.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::fq::{FieldElem, FqConfig};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    cfg: Arc<FqConfig>,
    c: Vec<FieldElem>, // little-endian, no trailing zeros
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
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
            write!(f, "({c})X^{i}")?;
        }
        Ok(())
    }
}

impl Poly {
    pub fn zero(cfg: &Arc<FqConfig>) -> Poly {
        Poly {
            cfg: cfg.clone(),
            c: Vec::new(),
        }
    }

    pub fn one(cfg: &Arc<FqConfig>) -> Poly {
        Poly::constant(FieldElem::one(cfg))
    }

    pub fn x(cfg: &Arc<FqConfig>) -> Poly {
        Poly::from_coeffs(
            cfg,
            vec![FieldElem::zero(cfg), FieldElem::one(cfg)],
        )
    }

    pub fn constant(c: FieldElem) -> Poly {
        let cfg = c.config().clone();
        Poly::from_coeffs(&cfg, vec![c])
    }

    pub fn from_coeffs(cfg: &Arc<FqConfig>, mut c: Vec<FieldElem>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly {
            cfg: cfg.clone(),
            c,
        }
    }

    pub fn config(&self) -> &Arc<FqConfig> {
        &self.cfg
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.c
            .get(i)
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(&self.cfg))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> FieldElem {
        self.c
            .last()
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(&self.cfg))
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|x| x.is_one())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn scale(&self, s: &FieldElem) -> Poly {
        Poly::from_coeffs(&self.cfg, self.c.iter().map(|x| x.mul(s)).collect())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&rhs.coeff(i)));
        }
        Poly::from_coeffs(&self.cfg, out)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).sub(&rhs.coeff(i)));
        }
        Poly::from_coeffs(&self.cfg, out)
    }

    pub fn neg(&self) -> Poly {
        Poly::from_coeffs(&self.cfg, self.c.iter().map(|x| x.neg()).collect())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.cfg);
        }
        let mut out = vec![FieldElem::zero(&self.cfg); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(&self.cfg, out)
    }

    pub fn mul_xpow(&self, e: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![FieldElem::zero(&self.cfg); e];
        c.extend(self.c.iter().cloned());
        Poly::from_coeffs(&self.cfg, c)
    }

    pub fn divmod(&self, rhs: &Poly) -> Result<(Poly, Poly)> {
        if rhs.is_zero() {
            return Err(Error::arithmetic("polynomial division by zero"));
        }
        let db = rhs.degree().unwrap();
        if self.degree().map_or(true, |da| da < db) {
            return Ok((Poly::zero(&self.cfg), self.clone()));
        }
        let lead_inv = rhs.lc().inv()?;
        let mut rem = self.c.clone();
        let da = self.degree().unwrap();
        let mut quot = vec![FieldElem::zero(&self.cfg); da - db + 1];
        for i in (0..=da - db).rev() {
            let top = rem[i + db].clone();
            if top.is_zero() {
                continue;
            }
            let c = top.mul(&lead_inv);
            quot[i] = c.clone();
            for (j, b) in rhs.c.iter().enumerate() {
                rem[i + j] = rem[i + j].sub(&c.mul(b));
            }
        }
        Ok((
            Poly::from_coeffs(&self.cfg, quot),
            Poly::from_coeffs(&self.cfg, rem),
        ))
    }

    pub fn rem(&self, rhs: &Poly) -> Result<Poly> {
        Ok(self.divmod(rhs)?.1)
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd restricted to what the crate needs: the inverse of
    /// `self` modulo `m` when they are coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m).ok()?);
        let (mut t0, mut t1) = (Poly::zero(&self.cfg), Poly::one(&self.cfg));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("r1 nonzero");
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t2;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = r0.lc().inv().ok()?;
        t0.scale(&c).rem(m).ok()
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = FieldElem::zero(&self.cfg);
        for c in self.c.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero(&self.cfg);
        }
        let out = self.c[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale((i + 1) as u64))
            .collect();
        Poly::from_coeffs(&self.cfg, out)
    }

    /// `self^e mod m` with a big-integer exponent.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut result = Poly::one(&self.cfg);
        let mut base = self.rem(m).expect("modulus nonzero");
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = result.mul(&base).rem(m).unwrap();
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m).unwrap();
            }
        }
        result
    }

    /// `self^p mod m` via the characteristic-p spread together with the
    /// coefficient Frobenius `c -> c^p`.
    pub fn pow_p_mod(&self, m: &Poly) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.cfg.p() as usize;
        let mut spread = vec![FieldElem::zero(&self.cfg); (self.c.len() - 1) * p + 1];
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                spread[i * p] = c.p_pow(1);
            }
        }
        Poly::from_coeffs(&self.cfg, spread).rem(m).unwrap()
    }

    /// `self^Q mod m` where `Q = |coefficient field| = p^N`.
    pub fn pow_field_size_mod(&self, m: &Poly) -> Poly {
        let mut acc = self.rem(m).unwrap();
        for _ in 0..self.cfg.deg() {
            acc = acc.pow_p_mod(m);
        }
        acc
    }

    /// Deterministic Rabin irreducibility test over the coefficient field.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else {
            return false;
        };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let f = self.monic();
        let x = Poly::x(&self.cfg);
        let mut checkpoints: Vec<usize> = {
            let mut n = d;
            let mut divs = Vec::new();
            let mut r = 2;
            while r * r <= n {
                if n % r == 0 {
                    divs.push(d / r);
                    while n % r == 0 {
                        n /= r;
                    }
                }
                r += 1;
            }
            if n > 1 {
                divs.push(d / n);
            }
            divs
        };
        checkpoints.sort_unstable();
        let mut x_pow = x.clone();
        let mut step = 0usize;
        for &cp in &checkpoints {
            while step < cp {
                x_pow = x_pow.pow_field_size_mod(&f);
                step += 1;
            }
            if f.gcd(&x_pow.sub(&x)).degree() != Some(0) {
                return false;
            }
        }
        while step < d {
            x_pow = x_pow.pow_field_size_mod(&f);
            step += 1;
        }
        x_pow.sub(&x).rem(&f).unwrap().is_zero()
    }

    /// Distinct-degree factorization of a squarefree monic polynomial:
    /// returns `(d, product of the irreducible factors of degree d)` for each
    /// degree that occurs.
    pub fn distinct_degree_factorization(&self) -> Vec<(usize, Poly)> {
        let mut f = self.monic();
        let mut out = Vec::new();
        let x = Poly::x(&self.cfg);
        let mut x_pow = x.rem(&f).unwrap();
        let mut d = 0usize;
        while f.degree().is_some_and(|df| df >= 2 * (d + 1)) {
            d += 1;
            x_pow = x_pow.pow_field_size_mod(&f);
            let g = f.gcd(&x_pow.sub(&x));
            if g.degree().is_some_and(|dg| dg > 0) {
                out.push((d, g.clone()));
                f = f.divmod(&g).unwrap().0;
                x_pow = x_pow.rem(&f).unwrap();
            }
        }
        if f.degree().is_some_and(|df| df > 0) {
            out.push((f.degree().unwrap(), f));
        }
        out
    }

    /// All roots of `self` in the coefficient field, sorted in canonical
    /// element order. Fully deterministic: splitting iterates over field
    /// elements (odd p) or a Frobenius-trace basis (p = 2) in a fixed order.
    pub fn roots_in_field(&self) -> Vec<FieldElem> {
        let mut roots = Vec::new();
        if self.is_zero() {
            return roots;
        }
        let mut f = self.monic();
        // strip the X-part
        while f.coeff(0).is_zero() && f.degree().is_some_and(|d| d > 0) {
            let (q, _) = f.divmod(&Poly::x(&self.cfg)).unwrap();
            if !roots.contains(&FieldElem::zero(&self.cfg)) {
                roots.push(FieldElem::zero(&self.cfg));
            }
            f = q;
        }
        if f.degree() == Some(0) {
            roots.sort();
            return roots;
        }
        // keep only the linear-factor part: gcd(f, X^|E| - X)
        let x = Poly::x(&self.cfg);
        let x_pow_size = {
            let mut acc = x.rem(&f).unwrap();
            for _ in 0..self.cfg.deg() {
                acc = acc.pow_p_mod(&f);
            }
            acc
        };
        let lin = f.gcd(&x_pow_size.sub(&x));
        let mut stack = vec![lin];
        while let Some(g) = stack.pop() {
            match g.degree() {
                None | Some(0) => continue,
                Some(1) => {
                    // monic X + c0 has root -c0
                    roots.push(g.coeff(0).neg());
                    continue;
                }
                _ => {}
            }
            let (h1, h2) = self.split_linear_product(&g);
            stack.push(h1);
            stack.push(h2);
        }
        roots.sort();
        roots
    }

    /// Split a monic product of >= 2 distinct linear factors into two proper
    /// parts, deterministically.
    fn split_linear_product(&self, g: &Poly) -> (Poly, Poly) {
        let cfg = &self.cfg;
        let p = cfg.p();
        if p == 2 {
            // Trace splitting: Tr(c X) separates some pair of roots for at
            // least one c in a GF(2)-basis of the field.
            for basis_idx in 0..cfg.deg() {
                let mut cv = vec![0u64; cfg.deg()];
                cv[basis_idx] = 1;
                let c = FieldElem::from_coeffs(cfg, cv);
                let cx = Poly::from_coeffs(cfg, vec![FieldElem::zero(cfg), c]);
                let mut term = cx.rem(g).unwrap();
                let mut trace = term.clone();
                for _ in 1..cfg.deg() {
                    term = term.pow_p_mod(g);
                    trace = trace.add(&term);
                }
                let h = g.gcd(&trace);
                let dh = h.deg_or_zero();
                if dh > 0 && dh < g.deg_or_zero() {
                    let other = g.divmod(&h).unwrap().0;
                    return (h, other.monic());
                }
            }
            unreachable!("trace basis separates distinct roots in char 2");
        }
        // Odd characteristic: (X + c)^((|E|-1)/2) - 1 keeps the roots r with
        // quadratic-residue r + c; iterate shifts in canonical element order.
        let order_minus_one =
            BigUint::from(p) .pow(cfg.deg() as u32) - BigUint::from(1u32);
        let half = &order_minus_one / BigUint::from(2u32);
        let mut code: u128 = 0;
        loop {
            let c = FieldElem::from_code(cfg, code);
            let shifted = Poly::from_coeffs(cfg, vec![c, FieldElem::one(cfg)]);
            let powed = shifted.pow_mod(&half, g);
            let h = g.gcd(&powed.sub(&Poly::one(cfg)));
            let dh = h.deg_or_zero();
            if dh > 0 && dh < g.deg_or_zero() {
                let other = g.divmod(&h).unwrap().0;
                return (h, other.monic());
            }
            code += 1;
        }
    }

    /// Replace `f(X)` by `g` with `g(X)^p = f(X)`, valid when `f' = 0`.
    pub fn pth_root(&self) -> Poly {
        let p = self.cfg.p() as usize;
        let deg_cfg = self.cfg.deg();
        let mut out = Vec::new();
        for (i, c) in self.c.iter().enumerate() {
            if i % p == 0 {
                // c^(1/p) = c^(p^(N-1))
                out.push(c.p_pow(deg_cfg - 1));
            } else {
                assert!(c.is_zero(), "pth_root requires zero derivative");
            }
        }
        Poly::from_coeffs(&self.cfg, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, n: usize) -> Arc<FqConfig> {
        FqConfig::canonical(p, n)
    }

    fn poly_from_ints(cfg: &Arc<FqConfig>, v: &[i64]) -> Poly {
        Poly::from_coeffs(
            cfg,
            v.iter().map(|&i| FieldElem::from_int(cfg, i)).collect(),
        )
    }

    #[test]
    fn divmod_reconstructs() {
        let k = gf(3, 1);
        let f = poly_from_ints(&k, &[1, 0, 2, 1, 1]);
        let g = poly_from_ints(&k, &[2, 1, 1]);
        let (q, r) = f.divmod(&g).unwrap();
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.deg_or_zero() < g.deg_or_zero());
    }

    #[test]
    fn gcd_of_common_factor() {
        let k = gf(3, 1);
        let a = poly_from_ints(&k, &[1, 1]); // t + 1
        let b = poly_from_ints(&k, &[2, 1]); // t + 2
        let f = a.mul(&b);
        let g = a.mul(&poly_from_ints(&k, &[1, 0, 1]));
        assert_eq!(f.gcd(&g), a);
    }

    #[test]
    fn irreducibility_over_gf3() {
        let k = gf(3, 1);
        // y^3 - y - 1 is irreducible over GF(3)
        assert!(poly_from_ints(&k, &[-1, -1, 0, 1]).is_irreducible());
        // t^2 + 2 = (t+1)(t+2) is not
        assert!(!poly_from_ints(&k, &[2, 0, 1]).is_irreducible());
    }

    #[test]
    fn roots_over_extension() {
        // roots of X^2 + 1 over GF(9): u and -u for the canonical modulus
        let f9 = gf(3, 2);
        let f = poly_from_ints(&f9, &[1, 0, 1]);
        let roots = f.roots_in_field();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(r.mul(r).add(&FieldElem::one(&f9)).is_zero());
        }
        // sorted canonical order
        assert!(roots[0] < roots[1]);
    }

    #[test]
    fn roots_char2_extension() {
        let f8 = gf(2, 3);
        // X^2 + X = X(X+1): roots 0 and 1
        let f = poly_from_ints(&f8, &[0, 1, 1]);
        let roots = f.roots_in_field();
        assert_eq!(
            roots,
            vec![FieldElem::zero(&f8), FieldElem::one(&f8)]
        );
    }

    #[test]
    fn ddf_degrees() {
        let k = gf(3, 1);
        // (t+1)(t+2)(t^2+1): degrees 1, 1, 2
        let f = poly_from_ints(&k, &[1, 1])
            .mul(&poly_from_ints(&k, &[2, 1]))
            .mul(&poly_from_ints(&k, &[1, 0, 1]));
        let parts = f.distinct_degree_factorization();
        let degrees: Vec<usize> = parts.iter().map(|(d, _)| *d).collect();
        assert_eq!(degrees, vec![1, 2]);
        assert_eq!(parts[0].1.degree(), Some(2));
        assert_eq!(parts[1].1.degree(), Some(2));
    }

    #[test]
    fn pow_mod_matches_naive() {
        let k = gf(5, 1);
        let f = poly_from_ints(&k, &[2, 0, 1, 1]);
        let g = poly_from_ints(&k, &[1, 3]);
        let e = BigUint::from(13u32);
        let mut naive = Poly::one(&k);
        for _ in 0..13 {
            naive = naive.mul(&g).rem(&f).unwrap();
        }
        assert_eq!(g.pow_mod(&e, &f), naive);
    }
}
