//! Finite-level torsion data for the Carlitz module.
//!
//! For a prime `p` not dividing the modulus `m`, the `m`-torsion of the
//! reduction mod `p` is realized inside an explicit splitting field
//! `GF(q^(d s))`: the kernel of the q-linearized polynomial `phi_m`, a free
//! rank-1 module over `A/m`. The character `chi_m` is read off from the
//! Frobenius action on a generator, and reciprocity predicts
//! `chi_m(Frob_p) = p mod m`; that equality is asserted by the verification
//! harness, never assumed here.

use serde::Serialize;

use crate::drinfeld::CarlitzModule;
use crate::error::{Error, Result};
use crate::field::poly::Poly;
use crate::field::{linalg, Coefficient, FieldElem};
use crate::polya::{self, PolyA, PrimeA, RatFunc, UnitGroupModM};
use crate::rng::SplitMix64;
use crate::skew::TwistedPoly;

/// The `m`-torsion of the reduction of the Carlitz module at `p`, realized
/// in an explicit splitting field.
pub struct TorsionRealization {
    pub prime: PrimeA,
    pub modulus: PolyA,
    /// Relative splitting degree over the residue field.
    pub s: usize,
    pub realization: polya::ResidueField,
    pub module: CarlitzModule<FieldElem>,
    /// All `q^(deg m)` torsion points, sorted in canonical element order.
    pub roots: Vec<FieldElem>,
    /// A generator: a root whose annihilator is exactly `(m)`.
    pub xi: FieldElem,
}

/// Value of `chi_m` at a Frobenius element: a residue coprime to `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterValue {
    pub modulus: PolyA,
    pub residue: PolyA,
}

/// Coefficients of `phi_m` as polynomials in `t` (exact, over `A`).
pub fn phi_m_coeffs(m: &PolyA) -> Result<Vec<PolyA>> {
    let generic = CarlitzModule::generic_rational(m.field());
    let phi = generic.phi_poly(m)?;
    phi.coeffs()
        .iter()
        .map(|c| {
            c.as_poly()
                .cloned()
                .ok_or_else(|| Error::invariant("phi_m has coefficients in A"))
        })
        .collect()
}

impl TorsionRealization {
    /// Evaluate the reduced `phi_a` at a point of the splitting field.
    pub fn phi_eval(&self, a: &PolyA, x: &FieldElem) -> Result<FieldElem> {
        self.module.phi_poly(a)?.eval(x)
    }
}

/// Build the torsion realization for `p` not dividing `m` (monic).
pub fn torsion_space(p: &PrimeA, m: &PolyA, rng: &mut SplitMix64) -> Result<TorsionRealization> {
    if !m.is_monic() {
        return Err(Error::usage("torsion modulus must be monic"));
    }
    if m.rem(p.poly())?.is_zero() {
        return Err(Error::domain(format!(
            "ramified/bad pair: {} divides {}",
            p.poly(),
            m
        )));
    }
    let k = p.field();
    let generic = CarlitzModule::generic_rational(k);
    if m.is_one() {
        let rf = p.realization(1);
        let module = generic.reduce_into(p, &rf.ext, &rf.t_bar)?;
        let zero = FieldElem::zero(rf.ext.field());
        return Ok(TorsionRealization {
            prime: p.clone(),
            modulus: m.clone(),
            s: 1,
            realization: rf,
            module,
            roots: vec![zero.clone()],
            xi: zero,
        });
    }
    let s = splitting_degree(p, m)?;
    let rf = p.realization(s);
    let module = generic.reduce_into(p, &rf.ext, &rf.t_bar)?;

    // kernel of the k-linear map y -> phi_m(y) over GF(p) coordinates
    let phi_m = module.phi_poly(m)?;
    let field = rf.ext.field().clone();
    let big_n = field.deg();
    let mut mat = vec![vec![0u64; big_n]; big_n];
    for j in 0..big_n {
        let mut basis = vec![0u64; big_n];
        basis[j] = 1;
        let b = FieldElem::from_coeffs(&field, basis);
        let img = phi_m.eval(&b)?;
        for (i, row) in mat.iter_mut().enumerate() {
            row[j] = img.coeffs()[i];
        }
    }
    let kernel = linalg::kernel(field.p(), &mat);
    let expected_dim = k.deg() * m.deg_or_zero();
    if kernel.len() != expected_dim {
        return Err(Error::invariant(format!(
            "torsion kernel has dimension {}, expected {}",
            kernel.len(),
            expected_dim
        )));
    }
    let mut roots = Vec::with_capacity(1 << expected_dim.min(20));
    let pch = field.p() as u128;
    let total = pch.pow(expected_dim as u32);
    for code in 0..total {
        let mut digits = code;
        let mut v = FieldElem::zero(&field);
        for basis_vec in &kernel {
            let d = (digits % pch) as u64;
            digits /= pch;
            if d != 0 {
                v = v.add(&FieldElem::from_coeffs(&field, basis_vec.clone()).scale(d));
            }
        }
        roots.push(v);
    }
    roots.sort();

    // generator: minimal root not killed by any phi_(m/q), q prime | m
    let cofactors: Vec<PolyA> = polya::factor_poly(m, rng)?
        .iter()
        .map(|(q, _)| m.divmod(q.poly()).map(|(c, _)| c))
        .collect::<Result<_>>()?;
    let cofactor_polys: Vec<TwistedPoly<FieldElem>> = cofactors
        .iter()
        .map(|c| module.phi_poly(c))
        .collect::<Result<_>>()?;
    let xi = roots
        .iter()
        .find(|r| {
            cofactor_polys
                .iter()
                .all(|phi_c| !phi_c.eval(r).unwrap().is_zero())
        })
        .cloned()
        .ok_or_else(|| Error::invariant("torsion module has a generator"))?;
    Ok(TorsionRealization {
        prime: p.clone(),
        modulus: m.clone(),
        s,
        realization: rf,
        module,
        roots,
        xi,
    })
}

/// Relative splitting degree of the `m`-torsion over the residue field:
/// the lcm of the irreducible factor degrees of `phi_m(X)/X` (distinct-degree
/// factorization only; the full splitting is never needed).
fn splitting_degree(p: &PrimeA, m: &PolyA) -> Result<usize> {
    let rf = p.residue_field();
    let generic = CarlitzModule::generic_rational(p.field());
    let module = generic.reduce_into(p, &rf.ext, &rf.t_bar)?;
    let phi_m = module.phi_poly(m)?;
    let x_poly = linearized_to_x_poly(&phi_m, rf.ext.field());
    let (quot, rem) = x_poly.divmod(&Poly::x(rf.ext.field()))?;
    if !rem.is_zero() {
        return Err(Error::invariant("phi_m(X) is divisible by X"));
    }
    if quot.coeff(0).is_zero() {
        return Err(Error::invariant(
            "phi_m must be separable when p does not divide m",
        ));
    }
    let mut s = 1usize;
    for (d, _) in quot.distinct_degree_factorization() {
        s = lcm(s, d);
    }
    Ok(s)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Expand a twisted polynomial into the ordinary polynomial
/// `sum c_i X^(q^i)`.
pub fn linearized_to_x_poly(
    f: &TwistedPoly<FieldElem>,
    field: &std::sync::Arc<crate::field::FqConfig>,
) -> Poly {
    let q = f
        .coeffs()
        .first()
        .map(|_| FieldElem::base_q(f.ctx()))
        .unwrap_or(2) as usize;
    let deg = f.deg().map(|d| q.pow(d as u32)).unwrap_or(0);
    let mut out = vec![FieldElem::zero(field); deg + 1];
    for (i, c) in f.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out[q.pow(i as u32)] = c.clone();
        }
    }
    Poly::from_coeffs(field, out)
}

/// `chi_m(Frob_p)`: the unique residue `a mod m` with
/// `xi^(N(p)) = phi_a(xi)` on a torsion generator `xi`.
pub fn chi_frobenius(p: &PrimeA, m: &PolyA, rng: &mut SplitMix64) -> Result<CharacterValue> {
    if m.is_one() {
        return Ok(CharacterValue {
            modulus: m.clone(),
            residue: PolyA::zero(m.field()),
        });
    }
    let space = torsion_space(p, m, rng)?;
    let ext = &space.realization.ext;
    let field = ext.field().clone();
    let k = p.field();
    let target = ext.frobenius(&space.xi, p.degree() as i64);

    // solve sum_i a_i phi_(t^i)(xi) = target for a_i in k, expanded over
    // GF(p) digits
    let deg_m = m.deg_or_zero();
    let n = k.deg();
    let big_n = field.deg();
    let mut columns: Vec<FieldElem> = Vec::with_capacity(deg_m * n);
    for i in 0..deg_m {
        let v = space.phi_eval(&PolyA::tpow(k, i), &space.xi)?;
        for r in 0..n {
            // the r-th GF(p)-basis digit of k is the element with code p^r
            let basis_r = ext.embed_k(&FieldElem::from_code(k, (k.p() as u128).pow(r as u32)));
            columns.push(basis_r.mul(&v));
        }
    }
    let mut mat = vec![vec![0u64; columns.len()]; big_n];
    for (j, col) in columns.iter().enumerate() {
        for (i, row) in mat.iter_mut().enumerate() {
            row[j] = col.coeffs()[i];
        }
    }
    let (solution, kernel) = linalg::solve_affine(field.p(), &mat, target.coeffs())
        .ok_or_else(|| Error::invariant("Frobenius action is multiplication by some a mod m"))?;
    if !kernel.is_empty() {
        return Err(Error::invariant(
            "Frobenius multiplier mod m is not unique: xi is not a generator",
        ));
    }
    let mut coeffs = Vec::with_capacity(deg_m);
    for i in 0..deg_m {
        let digits = solution[i * n..(i + 1) * n].to_vec();
        coeffs.push(FieldElem::from_coeffs(k, digits));
    }
    let residue = PolyA::from_coeffs(k, coeffs);
    if !residue.is_coprime_to(m) {
        return Err(Error::invariant("chi value must be a unit mod m"));
    }
    Ok(CharacterValue {
        modulus: m.clone(),
        residue,
    })
}

/// Both sides of the splitting-degree law: the lcm of `phi_m(X)/X` factor
/// degrees, and the multiplicative order of `p` in `(A/m)^x`. Reciprocity
/// makes them equal; the harness asserts it.
pub fn splitting_degree_law(p: &PrimeA, m: &PolyA, rng: &mut SplitMix64) -> Result<(usize, usize)> {
    if m.rem(p.poly())?.is_zero() {
        return Err(Error::domain("p divides m"));
    }
    let s_factored = if m.is_one() {
        1
    } else {
        splitting_degree(p, m)?
    };
    let units = UnitGroupModM::new(m, rng)?;
    let s_group = units.order_of(&p.poly().rem(m)?) as usize;
    Ok((s_factored, s_group))
}

/// Eisenstein certificate for `phi_p(X)/X` at the prime `p`.
#[derive(Debug, Clone, Serialize)]
pub struct CyclotomicReport {
    pub prime: String,
    /// tau-coefficients of `phi_p` as polynomials in `t`.
    pub coefficients: Vec<String>,
    pub monic: bool,
    /// every non-leading coefficient divisible by `p`
    pub middle_divisible: bool,
    /// constant coefficient equals `p` exactly (valuation 1)
    pub constant_is_prime: bool,
    pub eisenstein: bool,
    /// `[F(phi[p]) : F] = q^d - 1` implied by the certificate
    pub predicted_degree: u128,
}

/// Verify that `phi_p(X)/X` is Eisenstein at `p`: monic in the leading
/// position, all lower coefficients divisible by `p`, constant coefficient
/// exactly `p`. This certifies irreducibility over `F`, hence
/// `[F(phi[p]) : F] = q^d - 1`.
pub fn cyclotomic_check(p: &PrimeA) -> Result<CyclotomicReport> {
    let coeffs = phi_m_coeffs(p.poly())?;
    let d = p.degree();
    let monic = coeffs.last().is_some_and(|c| c.is_one());
    let middle_divisible = (1..d).all(|i| {
        coeffs[i]
            .rem(p.poly())
            .map(|r| r.is_zero())
            .unwrap_or(false)
    });
    let constant_is_prime = coeffs[0] == *p.poly();
    let q = polya::q_of(p.field()) as u128;
    Ok(CyclotomicReport {
        prime: p.to_string(),
        coefficients: coeffs.iter().map(|c| c.to_string()).collect(),
        monic,
        middle_divisible,
        constant_is_prime,
        eisenstein: monic && middle_divisible && constant_is_prime,
        predicted_degree: q.pow(d as u32) - 1,
    })
}

/// Smallest `D <= cap` such that the classes of primes of degree `<= D`
/// (away from `m`) cover all of `(A/m)^x`; `None` when the cap is reached
/// without covering (reported as an anomaly, not a panic).
pub fn chi_surjectivity_bound(m: &PolyA, cap: usize, rng: &mut SplitMix64) -> Result<Option<usize>> {
    let units = UnitGroupModM::new(m, rng)?;
    let want = units.order();
    let mut seen = std::collections::BTreeSet::new();
    for deg in 1..=cap {
        for p in polya::primes_of_degree(m.field(), deg) {
            if m.rem(p.poly())?.is_zero() {
                continue;
            }
            seen.insert(p.poly().rem(m)?);
        }
        if seen.len() as u128 == want {
            return Ok(Some(deg));
        }
    }
    Ok(None)
}

/// One row of the torsion verification report.
#[derive(Debug, Clone, Serialize)]
pub struct TorsionRow {
    pub q: u64,
    pub prime: String,
    pub modulus: String,
    pub chi: String,
    pub p_mod_m: String,
    pub pass: bool,
}

/// Compute `chi_m(Frob_p)` and compare with `p mod m`.
pub fn torsion_row(p: &PrimeA, m: &PolyA, rng: &mut SplitMix64) -> Result<TorsionRow> {
    let chi = chi_frobenius(p, m, rng)?;
    let expected = p.poly().rem(m)?;
    Ok(TorsionRow {
        q: polya::q_of(p.field()),
        prime: p.to_string(),
        modulus: m.to_string(),
        chi: chi.residue.to_string(),
        p_mod_m: expected.to_string(),
        pass: chi.residue == expected,
    })
}
