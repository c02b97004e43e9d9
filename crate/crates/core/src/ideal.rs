//! Prime ideals of O_K = Z[θ] via Kummer–Dedekind, valuations, and ideals
//! in Hermite normal form.
//!
//! Valuations use an explicit element τ with v_q(τ) = -1 and v ≥ 0 at every
//! other prime: if ℓO_K = ∏ q_i^{e_i} and q = (ℓ, g(θ)) with exponent e, then
//! h = g^{e-1} ∏_{q_i ≠ q} g_i^{e_i} gives τ = h(θ)/ℓ. Hence v_q(x) is the
//! largest k with x·h(θ)^k / ℓ^k still integral.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{minimal_polynomial, Field, FieldElement, FieldExt};
use crate::numeric::integer::{factor_integer, is_prime_u64, order_mod_plus_minus, strip_prime};
use crate::numeric::matrix::{hnf_mod, IntMatrix};
use crate::numeric::mod_poly::canonical_cmp;
use crate::numeric::{factor_mod_p, IntPoly, ModPoly};

#[derive(Clone)]
pub struct PrimeIdealFactor {
    field: Field,
    p: u64,
    gen_poly: ModPoly,
    e: u32,
    f: u32,
    /// g(θ) for a lift g of `gen_poly` with v_q(g(θ)) = 1.
    uniformizer: FieldElement,
    /// h(θ), with h(θ)/p of valuation -1 at this prime only.
    cofactor: FieldElement,
}

impl PrimeIdealFactor {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn gen_poly(&self) -> &ModPoly {
        &self.gen_poly
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn uniformizer(&self) -> &FieldElement {
        &self.uniformizer
    }

    /// The element h(θ)/p, of valuation -1 here and ≥ 0 at every other prime.
    pub fn inverse_uniformizer(&self) -> FieldElement {
        self.cofactor.div_int(&BigInt::from(self.p))
    }

    pub fn ideal(&self) -> IdealHNF {
        let d = self.field.degree();
        let p = BigInt::from(self.p);
        let mut gens: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                let mut row = vec![BigInt::zero(); d];
                row[i] = p.clone();
                row
            })
            .collect();
        let theta = self.field.theta(1).expect("d >= 1");
        let mut g = self.uniformizer.clone();
        for _ in 0..d {
            gens.push(g.numerator().to_vec());
            g = &g * &theta;
        }
        IdealHNF::from_generators(&self.field, &gens, &p)
    }

    /// v_q(x) for a nonzero element, fractional allowed.
    pub fn valuation(&self, x: &FieldElement) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        let mut den = x.denominator().clone();
        let den_part = strip_prime(&mut den, self.p) as i64 * self.e as i64;
        Ok(self.valuation_integral(x.numerator()) - den_part)
    }

    fn valuation_integral(&self, coords: &[BigInt]) -> i64 {
        let p = BigInt::from(self.p);
        let mut coords = coords.to_vec();
        let content = coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let mut c = content;
        let stripped = strip_prime(&mut c, self.p);
        if stripped > 0 {
            let scale = p.pow(stripped);
            for v in coords.iter_mut() {
                *v /= &scale;
            }
        }
        let mut v = stripped as i64 * self.e as i64;
        let h = self.cofactor.clone();
        let mut cur = self
            .field
            .element(coords, BigInt::one())
            .expect("coordinate count");
        loop {
            let next = &cur * &h;
            if next.numerator().iter().all(|c| c.is_multiple_of(&p)) {
                cur = next.div_int(&p);
                v += 1;
            } else {
                return v;
            }
        }
    }

    /// v_q(I) = min over a Z-basis, adjusted by the denominator.
    pub fn valuation_ideal(&self, ideal: &IdealHNF) -> Result<i64> {
        let mut den = ideal.den.clone();
        let den_part = strip_prime(&mut den, self.p) as i64 * self.e as i64;
        let v = ideal
            .basis
            .iter()
            .filter(|row| row.iter().any(|c| !c.is_zero()))
            .map(|row| self.valuation_integral(row))
            .min()
            .ok_or(Error::ZeroIdeal)?;
        Ok(v - den_part)
    }

    pub fn norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.f)
    }

    /// Display of the generator in θ.
    pub fn generator_text(&self) -> String {
        self.uniformizer.to_string()
    }
}

impl PartialEq for PrimeIdealFactor {
    fn eq(&self, other: &Self) -> bool {
        self.field.r() == other.field.r() && self.p == other.p && self.gen_poly == other.gen_poly
    }
}

impl Eq for PrimeIdealFactor {}

impl Ord for PrimeIdealFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then(self.f.cmp(&other.f))
            .then_with(|| canonical_cmp(&self.gen_poly, &other.gen_poly))
    }
}

impl PartialOrd for PrimeIdealFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimeIdealFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f as usize == self.field.degree() && self.e == 1 {
            write!(f, "({})", self.p)
        } else {
            write!(f, "({}, {})", self.p, self.uniformizer)
        }
    }
}

impl fmt::Debug for PrimeIdealFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [e={}, f={}]", self.e, self.f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeRepr {
    pub p: u64,
    pub gen_poly: String,
    pub generator: String,
    pub e: u32,
    pub f: u32,
}

impl From<&PrimeIdealFactor> for PrimeRepr {
    fn from(q: &PrimeIdealFactor) -> Self {
        PrimeRepr {
            p: q.p,
            gen_poly: q.gen_poly.lift().to_string(),
            generator: q.generator_text(),
            e: q.e,
            f: q.f,
        }
    }
}

/// Kummer–Dedekind splitting of pO_K, sorted by (f, gen_poly).
pub fn split_prime(field: &Field, p: u64) -> Result<Vec<PrimeIdealFactor>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let reduced = field.min_poly().reduce_mod(p);
    let mut factors = factor_mod_p(&reduced)?;
    factors.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| canonical_cmp(a, b))
    });
    let pb = BigInt::from(p);
    let lifts: Vec<FieldElement> = factors
        .iter()
        .map(|(g, e)| {
            let mut poly = g.lift();
            if *e >= 2 {
                poly = adjust_lift(field, poly, g.degree().unwrap_or(0) as u32, p);
            }
            field.from_poly(&poly)
        })
        .collect();
    let mut out = Vec::with_capacity(factors.len());
    for (i, (g, e)) in factors.iter().enumerate() {
        let mut h = field.one();
        for (k, (_, ek)) in factors.iter().enumerate() {
            let exp = if k == i { ek - 1 } else { *ek };
            if exp > 0 {
                h = &h * &lifts[k].pow(exp as i64)?;
            }
        }
        // Coordinates of h can be reduced mod p without changing τ's role.
        let reduced: Vec<BigInt> = h.numerator().iter().map(|c| c.mod_floor(&pb)).collect();
        let cofactor = field.element(reduced, BigInt::one())?;
        out.push(PrimeIdealFactor {
            field: field.clone(),
            p,
            gen_poly: g.clone(),
            e: *e,
            f: g.degree().unwrap_or(0) as u32,
            uniformizer: lifts[i].clone(),
            cofactor,
        });
    }
    Ok(out)
}

/// For a ramified factor, a lift g with v_q(g(θ)) ≥ 2 is shifted by p.
fn adjust_lift(field: &Field, poly: IntPoly, f: u32, p: u64) -> IntPoly {
    let pb = BigInt::from(p);
    let good = |poly: &IntPoly| {
        let n = field.from_poly(poly).numerator_norm();
        !n.is_zero() && {
            let mut m = n;
            strip_prime(&mut m, p) == f
        }
    };
    if good(&poly) {
        return poly;
    }
    let shifted = &poly + &IntPoly::constant(pb);
    debug_assert!(good(&shifted));
    shifted
}

/// The unique prime above r.
pub fn prime_above_r(field: &Field) -> PrimeIdealFactor {
    let mut v = split_prime(field, field.r()).expect("r is prime");
    assert_eq!(v.len(), 1, "r must be totally ramified");
    v.pop().unwrap()
}

pub fn primes_above_two(field: &Field) -> Vec<PrimeIdealFactor> {
    split_prime(field, 2).expect("2 is prime")
}

/// Polynomial-splitting criterion: pO_K with p = 2 is a single prime of
/// residue degree d.
pub fn is_two_inert(field: &Field) -> bool {
    let s = primes_above_two(field);
    let inert = s.len() == 1 && s[0].f as usize == field.degree() && s[0].e == 1;
    debug_assert_eq!(inert, two_inert_by_order(field.r()));
    inert
}

/// The same predicate from the factorization of P_r mod 2 alone, without
/// constructing the field.
pub fn two_inert_by_splitting(r: u64) -> Result<bool> {
    if !is_prime_u64(r) {
        return Err(Error::NotPrime(r.to_string()));
    }
    if r < 5 {
        return Err(Error::ConductorTooSmall(r));
    }
    let d = ((r - 1) / 2) as usize;
    let reduced = minimal_polynomial(r).reduce_mod(2);
    let fac = factor_mod_p(&reduced)?;
    Ok(fac.len() == 1 && fac[0].1 == 1 && fac[0].0.degree() == Some(d))
}

/// Arithmetic criterion: 2 has order (r-1)/2 in (Z/r)^*/{±1}.
pub fn two_inert_by_order(r: u64) -> bool {
    order_mod_plus_minus(2, r) == (r - 1) / 2
}

/// Rational primes dividing the numerator norm or denominator, with the
/// element's valuation at every prime above them. Anything the integer
/// factorizer could not split is returned in `unfactored`.
#[derive(Clone, Debug)]
pub struct ElementFactorization {
    pub factors: Vec<(PrimeIdealFactor, i64)>,
    pub unfactored: Vec<BigInt>,
}

pub fn factor_element(x: &FieldElement) -> Result<ElementFactorization> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let field = x.field();
    let norm_fac = factor_integer(&x.numerator_norm());
    let den_fac = factor_integer(x.denominator());
    let mut primes: Vec<u64> = norm_fac
        .primes()
        .chain(den_fac.primes())
        .map(|p| p.to_u64().expect("prime factors of desk-scale norms fit in u64"))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    let mut factors = Vec::new();
    for p in primes {
        for q in split_prime(field, p)? {
            let v = q.valuation(x)?;
            if v != 0 {
                factors.push((q, v));
            }
        }
    }
    let mut unfactored = norm_fac.unfactored;
    unfactored.extend(den_fac.unfactored);
    Ok(ElementFactorization {
        factors,
        unfactored,
    })
}

/// A nonzero fractional ideal (1/den)·M with M ⊆ O_K in lower-triangular
/// Hermite normal form and den minimal.
#[derive(Clone)]
pub struct IdealHNF {
    field: Field,
    basis: IntMatrix,
    den: BigInt,
}

impl IdealHNF {
    /// `modulus` must be a positive integer lying in the integral lattice.
    fn from_generators(field: &Field, gens: &[Vec<BigInt>], modulus: &BigInt) -> IdealHNF {
        let basis = hnf_mod(gens, field.degree(), modulus);
        IdealHNF {
            field: field.clone(),
            basis,
            den: BigInt::one(),
        }
    }

    fn normalised(mut self) -> IdealHNF {
        let content = self
            .basis
            .iter()
            .flatten()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let g = content.gcd(&self.den);
        if !g.is_one() {
            for row in self.basis.iter_mut() {
                for c in row.iter_mut() {
                    *c /= &g;
                }
            }
            self.den /= &g;
            // Dividing an HNF by a common factor keeps it in HNF.
        }
        self
    }

    /// Z-basis rows of the integral ideal (den·I).
    fn row_elements(&self) -> Vec<FieldElement> {
        self.basis
            .iter()
            .map(|row| self.field.element(row.clone(), BigInt::one()).unwrap())
            .collect()
    }

    pub fn unit(field: &Field) -> IdealHNF {
        IdealHNF::principal(&field.one()).expect("one is nonzero")
    }

    pub fn principal(x: &FieldElement) -> Result<IdealHNF> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let field = x.field();
        let n = x.numerator_norm().abs();
        let theta = field.theta(1)?;
        let mut g = x.numerator_element();
        let mut gens = Vec::with_capacity(field.degree());
        for _ in 0..field.degree() {
            gens.push(g.numerator().to_vec());
            g = &g * &theta;
        }
        let mut out = IdealHNF::from_generators(field, &gens, &n);
        out.den = x.denominator().clone();
        Ok(out.normalised())
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.den.is_one() && (0..self.basis.len()).all(|i| self.basis[i][i].is_one())
    }

    /// Index [O_K : den·I] (product of the diagonal).
    fn index(&self) -> BigInt {
        (0..self.basis.len()).fold(BigInt::one(), |acc, i| acc * &self.basis[i][i])
    }

    pub fn norm(&self) -> BigRational {
        BigRational::new(self.index(), self.den.pow(self.field.degree() as u32))
    }

    pub fn mul(&self, other: &IdealHNF) -> IdealHNF {
        let modulus = self.index() * other.index();
        let a = self.row_elements();
        let b = other.row_elements();
        let mut gens = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                gens.push((x * y).numerator().to_vec());
            }
        }
        let mut out = IdealHNF::from_generators(&self.field, &gens, &modulus);
        out.den = &self.den * &other.den;
        out.normalised()
    }

    /// I + J (the gcd of integral ideals).
    pub fn add(&self, other: &IdealHNF) -> IdealHNF {
        let den = self.den.lcm(&other.den);
        let sa = &den / &self.den;
        let sb = &den / &other.den;
        let modulus = (self.index() * &sa.pow(self.field.degree() as u32))
            .gcd(&(other.index() * &sb.pow(self.field.degree() as u32)));
        let gens: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|row| row.iter().map(|c| c * &sa).collect())
            .chain(
                other
                    .basis
                    .iter()
                    .map(|row| row.iter().map(|c| c * &sb).collect()),
            )
            .collect();
        let mut out = IdealHNF::from_generators(&self.field, &gens, &modulus);
        out.den = den;
        out.normalised()
    }

    pub fn pow(&self, n: u32) -> IdealHNF {
        let mut acc = IdealHNF::unit(&self.field);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        if x.is_zero() {
            return true;
        }
        // x ∈ (1/den)M iff den·x ∈ M, which needs den·x integral first.
        let scaled = x.scale_int(&self.den);
        if !scaled.is_integral() {
            return false;
        }
        let mut v = scaled.numerator().to_vec();
        for i in (0..v.len()).rev() {
            let (q, rem) = v[i].div_rem(&self.basis[i][i]);
            if !rem.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for c in 0..=i {
                    v[c] -= &q * &self.basis[i][c];
                }
            }
        }
        true
    }
}

impl PartialEq for IdealHNF {
    fn eq(&self, other: &Self) -> bool {
        self.field.r() == other.field.r() && self.den == other.den && self.basis == other.basis
    }
}

impl Eq for IdealHNF {}

impl fmt::Debug for IdealHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdealHNF[r={}](den={}, ", self.field.r(), self.den)?;
        f.debug_list().entries(self.basis.iter().map(|row| {
            row.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        }))
        .finish()?;
        write!(f, ")")
    }
}

/// Product of ideals q^e over a factor list.
pub fn ideal_from_factors(field: &Field, factors: &[(PrimeIdealFactor, i64)]) -> IdealHNF {
    let mut acc = IdealHNF::unit(field);
    for (q, e) in factors {
        assert!(*e >= 0, "negative exponents are not supported here");
        acc = acc.mul(&q.ideal().pow(*e as u32));
    }
    acc
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealCheck {
    pub label: String,
    pub j: usize,
    pub k: Option<usize>,
    pub equals_prime_above_r: bool,
}

/// Checks that (θ_j - 2) and (θ_j - θ_k) generate the prime above r.
pub fn verify_lemma_ideals(field: &Field) -> Vec<IdealCheck> {
    let d = field.degree();
    let rideal = prime_above_r(field).ideal();
    let two = field.from_int(2);
    let thetas: Vec<FieldElement> = (1..=d).map(|j| field.theta(j).unwrap()).collect();
    let mut out = Vec::new();
    for j in 1..=d {
        let x = &thetas[j - 1] - &two;
        out.push(IdealCheck {
            label: "theta_minus_two".into(),
            j,
            k: None,
            equals_prime_above_r: IdealHNF::principal(&x).unwrap() == rideal,
        });
        for k in j + 1..=d {
            let x = &thetas[j - 1] - &thetas[k - 1];
            out.push(IdealCheck {
                label: "theta_difference".into(),
                j,
                k: Some(k),
                equals_prime_above_r: IdealHNF::principal(&x).unwrap() == rideal,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn split_examples_r5() {
        let k = build_field(5).unwrap();
        let s5 = split_prime(&k, 5).unwrap();
        assert_eq!(s5.len(), 1);
        assert_eq!((s5[0].e(), s5[0].f()), (2, 1));
        assert_eq!(s5[0].gen_poly(), &ModPoly::from_i64(5, &[3, 1]));
        let s2 = split_prime(&k, 2).unwrap();
        assert_eq!(s2.len(), 1);
        assert_eq!(s2[0].f(), 2);
        let s11 = split_prime(&k, 11).unwrap();
        assert_eq!(s11.len(), 2);
        assert!(s11.iter().all(|q| q.f() == 1 && q.e() == 1));
        assert_eq!(split_prime(&k, 9).unwrap_err(), Error::NotPrime("9".into()));
    }

    #[test]
    fn valuations_r5() {
        let k = build_field(5).unwrap();
        let rr = prime_above_r(&k);
        let t = k.theta(1).unwrap();
        assert_eq!(rr.valuation(&(&t - &k.from_int(2))).unwrap(), 1);
        assert_eq!(rr.valuation(&k.from_int(5)).unwrap(), 2);
        assert_eq!(rr.valuation(&k.from_int(5).inverse().unwrap()).unwrap(), -2);
        let two = &primes_above_two(&k)[0];
        assert_eq!(two.valuation(&k.from_int(2)).unwrap(), 1);
        assert_eq!(two.valuation(&k.zero()).unwrap_err(), Error::ValuationOfZero);
    }

    #[test]
    fn ideal_examples() {
        let k = build_field(5).unwrap();
        let t = k.theta(1).unwrap();
        let a = IdealHNF::principal(&(&t - &k.from_int(2))).unwrap();
        assert_eq!(a.mul(&a).norm(), BigRational::from_integer(25.into()));
        assert!(IdealHNF::principal(&k.one()).unwrap().is_unit_ideal());
        let diff = &k.theta(1).unwrap() - &k.theta(2).unwrap();
        assert_eq!(IdealHNF::principal(&diff).unwrap(), prime_above_r(&k).ideal());
    }

    #[test]
    fn membership() {
        let k = build_field(7).unwrap();
        let q = prime_above_r(&k).ideal();
        let t = k.theta(1).unwrap();
        assert!(q.contains(&(&t - &k.from_int(2))));
        assert!(q.contains(&k.from_int(7)));
        assert!(!q.contains(&k.one()));
        assert!(!q.contains(&k.from_int(1).div_int(&BigInt::from(7))));
    }

    #[test]
    fn fractional_principal() {
        let k = build_field(5).unwrap();
        let half = k.one().div_int(&BigInt::from(2));
        let i = IdealHNF::principal(&half).unwrap();
        assert_eq!(i.denominator(), &BigInt::from(2));
        assert!(i.mul(&IdealHNF::principal(&k.from_int(2)).unwrap()).is_unit_ideal());
    }

    #[test]
    fn inertness_examples() {
        assert!(is_two_inert(&build_field(5).unwrap()));
        assert!(!is_two_inert(&build_field(17).unwrap()));
        assert!(!is_two_inert(&build_field(31).unwrap()));
        assert!(!two_inert_by_order(31));
        assert!(two_inert_by_splitting(29).unwrap());
    }
}
