//! Arithmetic in `A = k[t]` and its quotients.
//!
//! Polynomials are dense over the constant field `k`, always canonical (no
//! trailing zeros). Field elements of `F = k(t)` are reduced fractions with
//! monic denominator, which makes equality decidable and the sign function
//! well defined. Primes are monic irreducibles; they carry a lazily built
//! residue field `GF(q^d)` with a chosen image of `t`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::poly::Poly;
use crate::field::{Coefficient, ExtField, FieldElem, FqConfig};
use crate::rng::SplitMix64;

// ---- polynomials over k ------------------------------------------------------

/// Element of `A = k[t]`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyA {
    inner: Poly,
}

impl PolyA {
    pub fn zero(k: &Arc<FqConfig>) -> PolyA {
        PolyA {
            inner: Poly::zero(k),
        }
    }

    pub fn one(k: &Arc<FqConfig>) -> PolyA {
        PolyA {
            inner: Poly::one(k),
        }
    }

    pub fn t(k: &Arc<FqConfig>) -> PolyA {
        PolyA { inner: Poly::x(k) }
    }

    pub fn constant(c: FieldElem) -> PolyA {
        PolyA {
            inner: Poly::constant(c),
        }
    }

    pub fn from_coeffs(k: &Arc<FqConfig>, coeffs: Vec<FieldElem>) -> PolyA {
        PolyA {
            inner: Poly::from_coeffs(k, coeffs),
        }
    }

    pub fn from_ints(k: &Arc<FqConfig>, coeffs: &[i64]) -> PolyA {
        PolyA {
            inner: Poly::from_coeffs(
                k,
                coeffs.iter().map(|&c| FieldElem::from_int(k, c)).collect(),
            ),
        }
    }

    pub fn field(&self) -> &Arc<FqConfig> {
        self.inner.config()
    }

    pub fn inner(&self) -> &Poly {
        &self.inner
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.inner.coeff(i)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        self.inner.coeffs()
    }

    pub fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    pub fn deg_or_zero(&self) -> usize {
        self.inner.deg_or_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.inner.degree() == Some(0) && self.inner.coeff(0).is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.inner.is_monic()
    }

    pub fn lc(&self) -> FieldElem {
        self.inner.lc()
    }

    pub fn monic(&self) -> PolyA {
        PolyA {
            inner: self.inner.monic(),
        }
    }

    pub fn add(&self, rhs: &PolyA) -> PolyA {
        PolyA {
            inner: self.inner.add(&rhs.inner),
        }
    }

    pub fn sub(&self, rhs: &PolyA) -> PolyA {
        PolyA {
            inner: self.inner.sub(&rhs.inner),
        }
    }

    pub fn neg(&self) -> PolyA {
        PolyA {
            inner: self.inner.neg(),
        }
    }

    pub fn mul(&self, rhs: &PolyA) -> PolyA {
        PolyA {
            inner: self.inner.mul(&rhs.inner),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> PolyA {
        PolyA {
            inner: self.inner.scale(c),
        }
    }

    pub fn mul_tpow(&self, e: usize) -> PolyA {
        PolyA {
            inner: self.inner.mul_xpow(e),
        }
    }

    /// `t^e`.
    pub fn tpow(k: &Arc<FqConfig>, e: usize) -> PolyA {
        PolyA::one(k).mul_tpow(e)
    }

    pub fn divmod(&self, rhs: &PolyA) -> Result<(PolyA, PolyA)> {
        let (q, r) = self.inner.divmod(&rhs.inner)?;
        Ok((PolyA { inner: q }, PolyA { inner: r }))
    }

    pub fn rem(&self, rhs: &PolyA) -> Result<PolyA> {
        Ok(self.divmod(rhs)?.1)
    }

    pub fn gcd(&self, rhs: &PolyA) -> PolyA {
        PolyA {
            inner: self.inner.gcd(&rhs.inner),
        }
    }

    pub fn inv_mod(&self, m: &PolyA) -> Option<PolyA> {
        Some(PolyA {
            inner: self.inner.inv_mod(&m.inner)?,
        })
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        self.inner.eval(x)
    }

    pub fn is_irreducible(&self) -> bool {
        self.inner.is_irreducible()
    }

    pub fn is_coprime_to(&self, rhs: &PolyA) -> bool {
        self.gcd(rhs).degree() == Some(0)
    }

    /// Uniform polynomial of degree exactly `deg` (monic if requested).
    pub fn sample(rng: &mut SplitMix64, k: &Arc<FqConfig>, deg: usize, monic: bool) -> PolyA {
        let q = field_size(k);
        let mut coeffs: Vec<FieldElem> = (0..=deg)
            .map(|_| FieldElem::from_code(k, rng.below(q) as u128))
            .collect();
        coeffs[deg] = if monic {
            FieldElem::one(k)
        } else {
            FieldElem::from_code(k, 1 + rng.below(q - 1) as u128)
        };
        PolyA::from_coeffs(k, coeffs)
    }

    /// Parse the CLI polynomial syntax, e.g. `t^3+2*t+1`, with integer
    /// coefficient literals reduced mod p.
    pub fn parse(k: &Arc<FqConfig>, s: &str) -> Result<PolyA> {
        parse_poly(k, s)
    }
}

fn field_size(k: &Arc<FqConfig>) -> u64 {
    (k.p() as u128).pow(k.deg() as u32) as u64
}

/// Number of elements of `k` as `q = p^n`.
pub fn q_of(k: &Arc<FqConfig>) -> u64 {
    field_size(k)
}

impl PartialOrd for PolyA {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then lexicographic on little-endian coefficient vectors.
impl Ord for PolyA {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.inner
            .coeffs()
            .len()
            .cmp(&other.inner.coeffs().len())
            .then_with(|| self.inner.coeffs().cmp(other.inner.coeffs()))
    }
}

impl fmt::Debug for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{c}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

fn parse_poly(k: &Arc<FqConfig>, s: &str) -> Result<PolyA> {
    let mut acc = PolyA::zero(k);
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(Error::usage("empty polynomial"));
    }
    let bytes = text.as_bytes();
    let mut i = 0usize;
    let mut sign = 1i64;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        sign = if bytes[0] == b'-' { -1 } else { 1 };
        i = 1;
    }
    while i < bytes.len() {
        // term: [int] [*] [t [^int]]
        let mut coeff: Option<i64> = None;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i > start {
            coeff = Some(
                text[start..i]
                    .parse::<i64>()
                    .map_err(|_| Error::usage("coefficient overflow"))?,
            );
        }
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        let mut exp = 0usize;
        if i < bytes.len() && bytes[i] == b't' {
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let estart = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == estart {
                    return Err(Error::usage("missing exponent"));
                }
                exp = text[estart..i]
                    .parse::<usize>()
                    .map_err(|_| Error::usage("exponent overflow"))?;
            }
        } else if coeff.is_none() {
            return Err(Error::usage(format!(
                "unexpected character in polynomial: {s}"
            )));
        }
        let c = FieldElem::from_int(k, sign * coeff.unwrap_or(1));
        acc = acc.add(&PolyA::constant(c).mul_tpow(exp));
        if i == bytes.len() {
            return Ok(acc);
        }
        sign = match bytes[i] {
            b'+' => 1,
            b'-' => -1,
            _ => return Err(Error::usage(format!("expected + or - in polynomial: {s}"))),
        };
        i += 1;
    }
    Err(Error::usage("trailing sign in polynomial"))
}

// ---- primes -------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ResidueField {
    pub ext: ExtField,
    pub t_bar: FieldElem,
}

/// Monic irreducible of `A` with its residue field `GF(q^d)`.
#[derive(Clone)]
pub struct PrimeA {
    poly: PolyA,
    residue: Arc<OnceLock<ResidueField>>,
    realizations: Arc<std::sync::Mutex<std::collections::HashMap<usize, ResidueField>>>,
}

impl PrimeA {
    pub fn new(poly: PolyA) -> Result<PrimeA> {
        if !poly.is_monic() {
            return Err(Error::usage("prime must be monic"));
        }
        if poly.degree().map_or(true, |d| d == 0) {
            return Err(Error::usage("prime must be nonconstant"));
        }
        if !poly.is_irreducible() {
            return Err(Error::usage(format!("{poly} is reducible")));
        }
        Ok(PrimeA {
            poly,
            residue: Arc::new(OnceLock::new()),
            realizations: Arc::new(std::sync::Mutex::new(Default::default())),
        })
    }

    pub fn poly(&self) -> &PolyA {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.deg_or_zero()
    }

    pub fn field(&self) -> &Arc<FqConfig> {
        self.poly.field()
    }

    /// `N(p) = q^d`.
    pub fn norm(&self) -> BigUint {
        BigUint::from(field_size(self.field())).pow(self.degree() as u32)
    }

    /// The residue field with the minimal-root image of `t`, built on first
    /// use.
    pub fn residue_field(&self) -> &ResidueField {
        self.residue.get_or_init(|| {
            let ext = ExtField::new(self.field(), self.degree());
            let t_bar = self.root_in(&ext);
            ResidueField { ext, t_bar }
        })
    }

    /// A realization of the residue field inside `GF(q^(d*s))`: the
    /// extension together with the minimal root of the prime in it. Cached
    /// per `s`.
    pub fn realization(&self, s: usize) -> ResidueField {
        let mut cache = self.realizations.lock().unwrap();
        if let Some(hit) = cache.get(&s) {
            return hit.clone();
        }
        let ext = ExtField::new(self.field(), self.degree() * s);
        let t_bar = self.root_in(&ext);
        let rf = ResidueField { ext, t_bar };
        cache.insert(s, rf.clone());
        rf
    }

    /// Minimal root of the prime in an extension containing one.
    pub fn root_in(&self, ext: &ExtField) -> FieldElem {
        let embedded = Poly::from_coeffs(
            ext.field(),
            self.poly.coeffs().iter().map(|c| ext.embed_k(c)).collect(),
        );
        // The roots live in the GF(q^d) subfield; when that subfield is
        // small, enumerating the kernel of x -> x^(q^d) - x and evaluating
        // beats generic root splitting in the big field.
        let q = field_size(self.field()) as u128;
        let subfield_size = q.checked_pow(self.degree() as u32);
        if let Some(size) = subfield_size.filter(|&s| s <= 4096) {
            let p = ext.field().p();
            let nd = self.field().deg() * self.degree();
            let big_n = ext.field().deg();
            let mut mat = vec![vec![0u64; big_n]; big_n];
            for j in 0..big_n {
                let mut basis = vec![0u64; big_n];
                basis[j] = 1;
                let b = FieldElem::from_coeffs(ext.field(), basis);
                let img = b.p_pow(nd).sub(&b);
                for (i, row) in mat.iter_mut().enumerate() {
                    row[j] = img.coeffs()[i];
                }
            }
            let kernel = crate::field::linalg::kernel(p, &mat);
            assert_eq!(kernel.len(), nd, "subfield kernel dimension");
            let mut best: Option<FieldElem> = None;
            for code in 0..size {
                let mut digits = code;
                let mut v = FieldElem::zero(ext.field());
                for basis_vec in &kernel {
                    let d = (digits % p as u128) as u64;
                    digits /= p as u128;
                    if d != 0 {
                        v = v.add(&FieldElem::from_coeffs(ext.field(), basis_vec.clone()).scale(d));
                    }
                }
                if embedded.eval(&v).is_zero() && best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
            return best.expect("prime has a root in the realization");
        }
        let roots = embedded.roots_in_field();
        assert!(
            !roots.is_empty(),
            "prime of degree {} must have a root in GF(q^{})",
            self.degree(),
            ext.rel_deg()
        );
        roots[0].clone()
    }

    /// Reduce a fraction that is regular at this prime into the residue
    /// field: the ring homomorphism `t -> t_bar` with kernel `(p)` on `A`.
    pub fn residue_embed(&self, x: &RatFunc) -> Result<FieldElem> {
        let rf = self.residue_field();
        self.residue_embed_in(x, &rf.ext, &rf.t_bar)
    }

    /// Same reduction into a caller-supplied realization `(ext, t_bar)`.
    pub fn residue_embed_in(
        &self,
        x: &RatFunc,
        ext: &ExtField,
        t_bar: &FieldElem,
    ) -> Result<FieldElem> {
        let eval = |f: &PolyA| -> FieldElem {
            let mut acc = FieldElem::zero(ext.field());
            for c in f.coeffs().iter().rev() {
                acc = acc.mul(t_bar).add(&ext.embed_k(c));
            }
            acc
        };
        let den = eval(x.den());
        if den.is_zero() {
            return Err(Error::domain(format!(
                "pole at {}: denominator {} vanishes",
                self.poly,
                x.den()
            )));
        }
        Ok(eval(x.num()).div(&den).unwrap())
    }
}

impl PartialEq for PrimeA {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}
impl Eq for PrimeA {}

impl PartialOrd for PrimeA {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for PrimeA {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.poly.cmp(&other.poly)
    }
}

impl fmt::Debug for PrimeA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Display for PrimeA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Monic polynomials of fixed degree in lexicographic order.
pub fn monic_polys(k: &Arc<FqConfig>, deg: usize) -> Vec<PolyA> {
    let q = field_size(k) as u128;
    let total = q.pow(deg as u32);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut digits = code;
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            coeffs.push(FieldElem::from_code(k, digits % q));
            digits /= q;
        }
        coeffs.push(FieldElem::one(k));
        out.push(PolyA::from_coeffs(k, coeffs));
    }
    out.sort();
    out
}

/// All primes of the given degree, in lexicographic order.
pub fn primes_of_degree(k: &Arc<FqConfig>, deg: usize) -> Vec<PrimeA> {
    monic_polys(k, deg)
        .into_iter()
        .filter(|f| f.is_irreducible())
        .map(|f| PrimeA::new(f).unwrap())
        .collect()
}

/// All primes of degree `<= max_deg`, in (degree, lexicographic) order.
pub fn primes_up_to(k: &Arc<FqConfig>, max_deg: usize) -> Vec<PrimeA> {
    (1..=max_deg)
        .flat_map(|d| primes_of_degree(k, d))
        .collect()
}

/// Necklace count: the number of monic irreducibles of degree `d` over
/// `GF(q)` is `(1/d) sum_{e | d} mu(e) q^(d/e)`.
pub fn irreducible_count(q: u64, d: usize) -> u128 {
    fn mobius(mut n: usize) -> i64 {
        let mut m = 1i64;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let mut total = 0i128;
    for e in 1..=d {
        if d % e == 0 {
            total += mobius(e) as i128 * (q as i128).pow((d / e) as u32);
        }
    }
    (total as u128) / d as u128
}

// ---- fractions (elements of F = k(t)) -----------------------------------------

/// Reduced fraction over `A` with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: PolyA,
    den: PolyA,
}

impl RatFunc {
    pub fn zero(k: &Arc<FqConfig>) -> RatFunc {
        RatFunc {
            num: PolyA::zero(k),
            den: PolyA::one(k),
        }
    }

    pub fn one(k: &Arc<FqConfig>) -> RatFunc {
        RatFunc::from_poly(PolyA::one(k))
    }

    pub fn t(k: &Arc<FqConfig>) -> RatFunc {
        RatFunc::from_poly(PolyA::t(k))
    }

    pub fn from_poly(num: PolyA) -> RatFunc {
        let one = PolyA::one(num.field());
        RatFunc { num, den: one }
    }

    pub fn new(num: PolyA, den: PolyA) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::arithmetic("zero denominator"));
        }
        let mut out = RatFunc { num, den };
        out.normalize();
        Ok(out)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = PolyA::one(self.num.field());
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() != Some(0) {
            self.num = self.num.divmod(&g).unwrap().0;
            self.den = self.den.divmod(&g).unwrap().0;
        }
        let lc_inv = self.den.lc().inv().unwrap();
        self.num = self.num.scale(&lc_inv);
        self.den = self.den.scale(&lc_inv);
    }

    pub fn num(&self) -> &PolyA {
        &self.num
    }

    pub fn den(&self) -> &PolyA {
        &self.den
    }

    pub fn field(&self) -> &Arc<FqConfig> {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&PolyA> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
        .unwrap()
    }

    pub fn sub(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
        .unwrap()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).unwrap()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::arithmetic("inverse of zero"));
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// `ord_infty(f/g) = deg g - deg f`, so `ord_infty(1/t) = 1`.
    pub fn ord_infty(&self) -> i64 {
        assert!(!self.is_zero(), "ord of zero");
        self.den.deg_or_zero() as i64 - self.num.deg_or_zero() as i64
    }

    /// Valuation at a finite prime.
    pub fn ord_at(&self, p: &PrimeA) -> i64 {
        assert!(!self.is_zero(), "ord of zero");
        fn mult(f: &PolyA, p: &PolyA) -> i64 {
            let mut m = 0;
            let mut f = f.clone();
            loop {
                let (q, r) = f.divmod(p).unwrap();
                if !r.is_zero() {
                    return m;
                }
                m += 1;
                f = q;
            }
        }
        mult(&self.num, p.poly()) - mult(&self.den, p.poly())
    }

    /// Residue of a fraction whose denominator is coprime to `m`.
    pub fn reduce_mod(&self, m: &PolyA) -> Result<PolyA> {
        if m.is_one() {
            return Ok(PolyA::zero(m.field()));
        }
        let den_inv = self
            .den
            .inv_mod(m)
            .ok_or_else(|| Error::domain("denominator not invertible mod m"))?;
        self.num.mul(&den_inv).rem(m)
    }

    /// Uniform nonzero fraction with numerator/denominator degrees `<= deg`.
    pub fn sample_nonzero(rng: &mut SplitMix64, k: &Arc<FqConfig>, deg: usize) -> RatFunc {
        let dn = rng.below(deg as u64 + 1) as usize;
        let num = PolyA::sample(rng, k, dn, false);
        let dd = rng.below(deg as u64 + 1) as usize;
        let den = PolyA::sample(rng, k, dd, true);
        RatFunc::new(num, den).unwrap()
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Coefficient for RatFunc {
    type Ctx = Arc<FqConfig>;

    fn zero(ctx: &Self::Ctx) -> Self {
        RatFunc::zero(ctx)
    }

    fn one(ctx: &Self::Ctx) -> Self {
        RatFunc::one(ctx)
    }

    fn base_q(ctx: &Self::Ctx) -> u64 {
        field_size(ctx)
    }

    fn from_k(_ctx: &Self::Ctx, c: &FieldElem) -> Self {
        RatFunc::from_poly(PolyA::constant(c.clone()))
    }

    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        RatFunc::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        RatFunc::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        RatFunc::mul(self, rhs)
    }

    fn inv(&self) -> Result<Self> {
        RatFunc::inv(self)
    }

    /// `x -> x^(q^j)` by substituting `t -> t^(q^j)`; coefficients in `k`
    /// are Frobenius-fixed. Negative `j` fails unless the element is an
    /// exact `q^|j|`-th power (perfected coefficients exist for the rest).
    fn frobenius(&self, ctx: &Self::Ctx, j: i64) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let q = field_size(ctx) as usize;
        if j >= 0 {
            let jump = q.pow(j as u32);
            let stretch = |f: &PolyA| {
                let mut out = vec![FieldElem::zero(ctx); f.deg_or_zero() * jump + 1];
                for (i, c) in f.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        out[i * jump] = c.clone();
                    }
                }
                PolyA::from_coeffs(ctx, out)
            };
            Ok(RatFunc {
                num: stretch(&self.num),
                den: stretch(&self.den),
            })
        } else {
            let jump = q.pow((-j) as u32);
            let compress = |f: &PolyA| -> Option<PolyA> {
                let mut out = Vec::new();
                for (i, c) in f.coeffs().iter().enumerate() {
                    if i % jump == 0 {
                        out.push(c.clone());
                    } else if !c.is_zero() {
                        return None;
                    }
                }
                Some(PolyA::from_coeffs(ctx, out))
            };
            match (compress(&self.num), compress(&self.den)) {
                (Some(num), Some(den)) => Ok(RatFunc { num, den }),
                _ => Err(Error::unsupported(
                    "q-th root does not exist in k(t); use perfected coefficients",
                )),
            }
        }
    }
}

/// The sign function: `epsilon(f/g) = lc(f)/lc(g)`, the unique sign function
/// of `F_infty` with `epsilon(1/t) = 1`. Restricted to `k^x` it is the
/// identity.
pub fn sign_epsilon(x: &RatFunc) -> Result<FieldElem> {
    if x.is_zero() {
        return Err(Error::usage("sign of zero"));
    }
    x.num().lc().div(&x.den().lc())
}

// ---- factorization -------------------------------------------------------------

/// Factor a nonzero polynomial into monic irreducibles with multiplicity,
/// sorted in (degree, lexicographic) order. Squarefree split, then
/// distinct-degree, then seeded equal-degree splitting.
pub fn factor_poly(f: &PolyA, rng: &mut SplitMix64) -> Result<Vec<(PrimeA, usize)>> {
    if f.is_zero() {
        return Err(Error::usage("cannot factor zero"));
    }
    let mut acc: std::collections::BTreeMap<PolyA, usize> = Default::default();
    factor_monic(&f.monic(), 1, &mut acc, rng);
    Ok(acc
        .into_iter()
        .map(|(poly, mult)| (PrimeA::new(poly).unwrap(), mult))
        .collect())
}

fn factor_monic(
    f: &PolyA,
    mult: usize,
    acc: &mut std::collections::BTreeMap<PolyA, usize>,
    rng: &mut SplitMix64,
) {
    if f.degree().map_or(true, |d| d == 0) {
        return;
    }
    let deriv = PolyA {
        inner: f.inner.derivative(),
    };
    if deriv.is_zero() {
        // f = g^p with g obtained by p-th roots of the coefficients
        let g = PolyA {
            inner: f.inner.pth_root(),
        };
        factor_monic(&g, mult * f.field().p() as usize, acc, rng);
        return;
    }
    let repeated = f.gcd(&deriv);
    let squarefree = f.divmod(&repeated).unwrap().0;
    for (d, block) in squarefree.inner.distinct_degree_factorization() {
        for factor in equal_degree_split(&PolyA { inner: block }, d, rng) {
            *acc.entry(factor).or_insert(0) += mult;
        }
    }
    if repeated.degree().is_some_and(|d| d > 0) {
        factor_monic(&repeated, mult, acc, rng);
    }
}

/// Cantor-Zassenhaus equal-degree splitting; randomness comes from the
/// caller's seeded stream, so factorizations are reproducible.
fn equal_degree_split(f: &PolyA, d: usize, rng: &mut SplitMix64) -> Vec<PolyA> {
    let deg = f.deg_or_zero();
    if deg == d {
        return vec![f.monic()];
    }
    let k = f.field();
    let q = field_size(k);
    let p = k.p();
    loop {
        let rdeg = rng.below(deg as u64) as usize;
        let r = PolyA::sample(rng, k, rdeg, false);
        let candidate = if p == 2 {
            // additive trace map relative to GF(2^(n d))
            let reps = k.deg() * d;
            let mut term = r.rem(f).unwrap();
            let mut trace = term.clone();
            for _ in 1..reps {
                term = PolyA {
                    inner: term.inner.pow_p_mod(&f.inner),
                };
                trace = trace.add(&term);
            }
            f.gcd(&trace)
        } else {
            let e = (BigUint::from(q).pow(d as u32) - BigUint::from(1u32)) / BigUint::from(2u32);
            let powed = PolyA {
                inner: r.inner.pow_mod(&e, &f.inner),
            };
            f.gcd(&powed.sub(&PolyA::one(k)))
        };
        let dc = candidate.deg_or_zero();
        if dc > 0 && dc < deg {
            let rest = f.divmod(&candidate).unwrap().0;
            let mut out = equal_degree_split(&candidate, d, rng);
            out.extend(equal_degree_split(&rest, d, rng));
            return out;
        }
    }
}

// ---- unit groups ---------------------------------------------------------------

/// `(A/(m))^x` for a monic modulus.
#[derive(Debug, Clone)]
pub struct UnitGroupModM {
    m: PolyA,
    order: u128,
    factorization: Vec<(PrimeA, usize)>,
    reps: Option<Vec<PolyA>>,
}

const ENUMERATION_LIMIT: u128 = 1 << 16;

impl UnitGroupModM {
    pub fn new(m: &PolyA, rng: &mut SplitMix64) -> Result<UnitGroupModM> {
        if !m.is_monic() {
            return Err(Error::usage("modulus must be monic"));
        }
        if m.is_one() {
            return Ok(UnitGroupModM {
                m: m.clone(),
                order: 1,
                factorization: Vec::new(),
                reps: Some(vec![PolyA::zero(m.field())]),
            });
        }
        let q = field_size(m.field()) as u128;
        let factorization = factor_poly(m, rng)?;
        let mut order = 1u128;
        for (p, e) in &factorization {
            let nd = q.pow(p.degree() as u32);
            order *= nd.pow((*e as u32) - 1) * (nd - 1);
        }
        let total = q.pow(m.deg_or_zero() as u32);
        let reps = (total <= ENUMERATION_LIMIT).then(|| {
            let mut reps: Vec<PolyA> = Vec::with_capacity(order as usize);
            for code in 0..total {
                let r = residue_from_code(m.field(), code, m.deg_or_zero());
                if r.is_coprime_to(m) {
                    reps.push(r);
                }
            }
            reps.sort();
            reps
        });
        if let Some(reps) = &reps {
            assert_eq!(reps.len() as u128, order, "unit count matches Euler product");
        }
        Ok(UnitGroupModM {
            m: m.clone(),
            order,
            factorization,
            reps,
        })
    }

    pub fn modulus(&self) -> &PolyA {
        &self.m
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn factorization(&self) -> &[(PrimeA, usize)] {
        &self.factorization
    }

    /// Explicit residue representatives (sorted), when enumerable.
    pub fn representatives(&self) -> Option<&[PolyA]> {
        self.reps.as_deref()
    }

    pub fn contains(&self, a: &PolyA) -> bool {
        self.m.is_one() || a.is_coprime_to(&self.m)
    }

    pub fn mul(&self, a: &PolyA, b: &PolyA) -> PolyA {
        if self.m.is_one() {
            return PolyA::zero(self.m.field());
        }
        a.mul(b).rem(&self.m).unwrap()
    }

    pub fn inv(&self, a: &PolyA) -> Result<PolyA> {
        if self.m.is_one() {
            return Ok(PolyA::zero(self.m.field()));
        }
        a.inv_mod(&self.m)
            .ok_or_else(|| Error::domain("element not coprime to modulus"))
    }

    pub fn identity(&self) -> PolyA {
        if self.m.is_one() {
            PolyA::zero(self.m.field())
        } else {
            PolyA::one(self.m.field())
        }
    }

    /// Multiplicative order of a unit.
    pub fn order_of(&self, a: &PolyA) -> u128 {
        if self.m.is_one() {
            return 1;
        }
        let a = a.rem(&self.m).unwrap();
        let mut pow = a.clone();
        let mut n = 1u128;
        let id = self.identity();
        while pow != id {
            pow = self.mul(&pow, &a);
            n += 1;
            assert!(n <= self.order, "unit order exceeds group order");
        }
        n
    }
}

fn residue_from_code(k: &Arc<FqConfig>, mut code: u128, deg: usize) -> PolyA {
    let q = field_size(k) as u128;
    let mut coeffs = Vec::with_capacity(deg);
    for _ in 0..deg {
        coeffs.push(FieldElem::from_code(k, code % q));
        code /= q;
    }
    PolyA::from_coeffs(k, coeffs)
}

/// All residues mod `m` (degree `< deg m`), in lexicographic order.
pub fn residues_mod(m: &PolyA) -> Vec<PolyA> {
    let q = field_size(m.field()) as u128;
    let deg = m.deg_or_zero();
    let total = q.pow(deg as u32);
    let mut out: Vec<PolyA> = (0..total)
        .map(|code| residue_from_code(m.field(), code, deg))
        .collect();
    out.sort();
    out
}
