//! Truncated elements of `F_infty = k((1/t))`.
//!
//! An [`InftySeries`] is a nonzero Laurent series `sum c_i t^(top - i)` kept
//! to a fixed number of terms; `top = -ord_infty` and the leading
//! coefficient is the sign. [`OneUnit`] is the class of a 1-unit in
//! `(1 + m_infty) / (1 + m_infty^e)`, stored as the `e-1` coefficients of
//! `t^-1 .. t^-(e-1)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FqConfig};
use crate::polya::RatFunc;

#[derive(Clone, PartialEq, Eq)]
pub struct InftySeries {
    k: Arc<FqConfig>,
    top: i64,
    coeffs: Vec<FieldElem>, // coeffs[0] != 0; length = precision
}

impl InftySeries {
    /// Expand a nonzero fraction to `prec` terms.
    pub fn from_ratfunc(x: &RatFunc, prec: usize) -> Result<InftySeries> {
        if x.is_zero() {
            return Err(Error::usage("cannot expand zero at infinity"));
        }
        assert!(prec >= 1);
        let k = x.field().clone();
        let num = x.num();
        let den = x.den();
        let a = num.deg_or_zero();
        let b = den.deg_or_zero();
        // reversed coefficient sequences are power series in s = 1/t
        let rev = |f: &crate::polya::PolyA, deg: usize| -> Vec<FieldElem> {
            (0..prec)
                .map(|i| {
                    if i <= deg {
                        f.coeff(deg - i)
                    } else {
                        FieldElem::zero(&k)
                    }
                })
                .collect()
        };
        let nr = rev(num, a);
        let dr = rev(den, b);
        // divide power series: dr[0] = lc(den) = 1 (monic denominators)
        let lead_inv = dr[0].inv()?;
        let mut out = Vec::with_capacity(prec);
        for i in 0..prec {
            let mut acc = nr[i].clone();
            for (j, o) in out.iter().enumerate().take(i) {
                acc = acc.sub(&dr[i - j].mul(o));
            }
            out.push(acc.mul(&lead_inv));
        }
        Ok(InftySeries {
            k,
            top: a as i64 - b as i64,
            coeffs: out,
        })
    }

    pub fn from_parts(k: &Arc<FqConfig>, top: i64, coeffs: Vec<FieldElem>) -> Result<InftySeries> {
        if coeffs.is_empty() || coeffs[0].is_zero() {
            return Err(Error::usage("leading coefficient must be nonzero"));
        }
        Ok(InftySeries {
            k: k.clone(),
            top,
            coeffs,
        })
    }

    pub fn field(&self) -> &Arc<FqConfig> {
        &self.k
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn ord_infty(&self) -> i64 {
        -self.top
    }

    /// Leading coefficient; equals the sign `epsilon` of the element.
    pub fn sign(&self) -> FieldElem {
        self.coeffs[0].clone()
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(&self.k))
    }

    pub fn truncate(&self, prec: usize) -> InftySeries {
        assert!(prec >= 1);
        let mut out = self.clone();
        out.coeffs.truncate(prec);
        out
    }

    pub fn mul(&self, rhs: &InftySeries) -> InftySeries {
        let prec = self.precision().min(rhs.precision());
        let mut coeffs = vec![FieldElem::zero(&self.k); prec];
        for (i, a) in self.coeffs.iter().enumerate().take(prec) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= prec {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        InftySeries {
            k: self.k.clone(),
            top: self.top + rhs.top,
            coeffs,
        }
    }

    pub fn inv(&self) -> InftySeries {
        let prec = self.precision();
        let lead_inv = self.coeffs[0].inv().expect("leading coefficient nonzero");
        let mut out = Vec::with_capacity(prec);
        out.push(lead_inv.clone());
        for i in 1..prec {
            let mut acc = FieldElem::zero(&self.k);
            for j in 0..i {
                acc = acc.sub(&self.coeffs[i - j].mul(&out[j]));
            }
            out.push(acc.mul(&lead_inv));
        }
        InftySeries {
            k: self.k.clone(),
            top: -self.top,
            coeffs: out,
        }
    }

    /// The 1-unit part modulo `1 + m_infty^e`: divide by `sign * t^top` and
    /// read off the coefficients of `t^-1 .. t^-(e-1)`.
    pub fn one_unit(&self, e: usize) -> Result<OneUnit> {
        if e >= 2 && self.precision() < e {
            return Err(Error::precision(format!(
                "infinity component has {} terms, modulus needs {e}",
                self.precision()
            )));
        }
        let lead_inv = self.coeffs[0].inv()?;
        let coeffs = (1..e).map(|i| self.coeff(i).mul(&lead_inv)).collect();
        Ok(OneUnit {
            k: self.k.clone(),
            coeffs,
        })
    }

    pub fn eq_to_precision(&self, rhs: &InftySeries, prec: usize) -> bool {
        if self.top != rhs.top {
            return false;
        }
        (0..prec).all(|i| self.coeff(i) == rhs.coeff(i))
    }
}

impl fmt::Debug for InftySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for InftySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let e = self.top - i as i64;
            match e {
                0 => write!(f, "{c}")?,
                1 => {
                    if c.is_one() {
                        write!(f, "t")?
                    } else {
                        write!(f, "{c}*t")?
                    }
                }
                _ => {
                    if c.is_one() {
                        write!(f, "t^{e}")?
                    } else {
                        write!(f, "{c}*t^{e}")?
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "+O(t^{})", self.top - self.coeffs.len() as i64)
    }
}

// ---- classes of 1-units ---------------------------------------------------

/// Class in `(1 + m_infty) / (1 + m_infty^e)`: the element
/// `1 + c_1 t^-1 + ... + c_(e-1) t^-(e-1)`.
#[derive(Clone, PartialEq, Eq)]
pub struct OneUnit {
    k: Arc<FqConfig>,
    coeffs: Vec<FieldElem>, // c_1 .. c_(e-1)
}

impl PartialOrd for OneUnit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OneUnit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl OneUnit {
    pub fn identity(k: &Arc<FqConfig>, e: usize) -> OneUnit {
        OneUnit {
            k: k.clone(),
            coeffs: vec![FieldElem::zero(k); e.saturating_sub(1)],
        }
    }

    pub fn from_coeffs(k: &Arc<FqConfig>, coeffs: Vec<FieldElem>) -> OneUnit {
        OneUnit {
            k: k.clone(),
            coeffs,
        }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// `e` such that the class lives mod `1 + m_infty^e`.
    pub fn level(&self) -> usize {
        self.coeffs.len() + 1
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, rhs: &OneUnit) -> OneUnit {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len(), "level mismatch");
        let e = self.level();
        let a = |i: usize| -> FieldElem {
            if i == 0 {
                FieldElem::one(&self.k)
            } else {
                self.coeffs[i - 1].clone()
            }
        };
        let b = |i: usize| -> FieldElem {
            if i == 0 {
                FieldElem::one(&self.k)
            } else {
                rhs.coeffs[i - 1].clone()
            }
        };
        let mut out = Vec::with_capacity(e - 1);
        for m in 1..e {
            let mut acc = FieldElem::zero(&self.k);
            for i in 0..=m {
                acc = acc.add(&a(i).mul(&b(m - i)));
            }
            out.push(acc);
        }
        OneUnit {
            k: self.k.clone(),
            coeffs: out,
        }
    }

    pub fn inv(&self) -> OneUnit {
        let e = self.level();
        let mut out: Vec<FieldElem> = Vec::with_capacity(e - 1);
        for m in 1..e {
            // b_m = -(a_m + sum_{i=1}^{m-1} a_i b_(m-i))
            let mut acc = self.coeffs[m - 1].clone();
            for i in 1..m {
                acc = acc.add(&self.coeffs[i - 1].mul(&out[m - i - 1]));
            }
            out.push(acc.neg());
        }
        OneUnit {
            k: self.k.clone(),
            coeffs: out,
        }
    }

    /// All `q^(e-1)` classes, in lexicographic order.
    pub fn enumerate(k: &Arc<FqConfig>, e: usize) -> Vec<OneUnit> {
        let q = crate::polya::q_of(k) as u128;
        let len = e.saturating_sub(1);
        let total = q.pow(len as u32);
        let mut out = Vec::with_capacity(total as usize);
        for code in 0..total {
            let mut digits = code;
            let coeffs = (0..len)
                .map(|_| {
                    let c = FieldElem::from_code(k, digits % q);
                    digits /= q;
                    c
                })
                .collect();
            out.push(OneUnit {
                k: k.clone(),
                coeffs,
            });
        }
        out.sort();
        out
    }
}

impl fmt::Debug for OneUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for OneUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                write!(f, "+t^-{}", i + 1)?;
            } else {
                write!(f, "+{}*t^-{}", c, i + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polya::PolyA;
    use crate::rng::SplitMix64;

    fn k3() -> Arc<FqConfig> {
        FqConfig::canonical(3, 1)
    }

    #[test]
    fn expansion_of_t_plus_one_over_t() {
        // (t+1)/t = 1 + t^-1
        let k = k3();
        let x = RatFunc::new(PolyA::from_ints(&k, &[1, 1]), PolyA::t(&k)).unwrap();
        let s = InftySeries::from_ratfunc(&x, 4).unwrap();
        assert_eq!(s.ord_infty(), 0);
        assert_eq!(s.coeff(0), FieldElem::one(&k));
        assert_eq!(s.coeff(1), FieldElem::one(&k));
        assert!(s.coeff(2).is_zero() && s.coeff(3).is_zero());
    }

    #[test]
    fn series_inverse_multiplies_to_one() {
        let k = k3();
        let mut rng = SplitMix64::new(8);
        for _ in 0..50 {
            let x = RatFunc::sample_nonzero(&mut rng, &k, 3);
            let s = InftySeries::from_ratfunc(&x, 6).unwrap();
            let prod = s.mul(&s.inv());
            assert_eq!(prod.ord_infty(), 0);
            assert_eq!(prod.coeff(0), FieldElem::one(&k));
            for i in 1..6 {
                assert!(prod.coeff(i).is_zero());
            }
        }
    }

    #[test]
    fn expansion_is_multiplicative() {
        let k = k3();
        let mut rng = SplitMix64::new(15);
        for _ in 0..50 {
            let x = RatFunc::sample_nonzero(&mut rng, &k, 3);
            let y = RatFunc::sample_nonzero(&mut rng, &k, 3);
            let sx = InftySeries::from_ratfunc(&x, 5).unwrap();
            let sy = InftySeries::from_ratfunc(&y, 5).unwrap();
            let sxy = InftySeries::from_ratfunc(&x.mul(&y), 5).unwrap();
            assert!(sx.mul(&sy).eq_to_precision(&sxy, 5));
        }
    }

    #[test]
    fn one_unit_group_laws() {
        let k = k3();
        let units = OneUnit::enumerate(&k, 3);
        assert_eq!(units.len(), 9);
        let id = OneUnit::identity(&k, 3);
        for u in &units {
            assert_eq!(u.mul(&u.inv()), id);
            for v in &units {
                assert_eq!(u.mul(v), v.mul(u));
            }
        }
    }

    #[test]
    fn one_unit_from_series_drops_valuation_and_sign() {
        let k = k3();
        // 2t^2 + 2t = 2 t^2 (1 + t^-1)
        let x = RatFunc::from_poly(PolyA::from_ints(&k, &[0, 2, 2]));
        let s = InftySeries::from_ratfunc(&x, 4).unwrap();
        assert_eq!(s.sign(), FieldElem::from_int(&k, 2));
        let u = s.one_unit(3).unwrap();
        assert_eq!(
            u.coeffs(),
            &[FieldElem::one(&k), FieldElem::zero(&k)]
        );
    }
}
