//! The real cyclotomic field K = Q(θ), θ = ζ_r + ζ_r^{-1}, for a prime r ≥ 5.
//!
//! Elements are stored in the power basis 1, θ, …, θ^{d-1} (d = (r-1)/2)
//! with an integer numerator vector and a positive common denominator. The
//! ring of integers is Z[θ], so an element is integral exactly when its
//! normalised denominator is 1.
//!
//! The minimal polynomial comes from the Chebyshev-type recurrence
//! V_0 = 2, V_1 = x, V_{k+1} = x V_k - V_{k-1}: V_k(θ) = θ_k and
//! P_r = 1 + V_1 + … + V_d.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::int_poly::write_poly;
use crate::numeric::integer::{is_prime_u64, order_mod_plus_minus, strip_prime};
use crate::numeric::matrix::{determinant, solve_rational, IntMatrix};
use crate::numeric::IntPoly;

pub type Field = Arc<RealCyclotomicField>;

#[derive(Debug)]
pub struct RealCyclotomicField {
    r: u64,
    d: usize,
    min_poly: IntPoly,
    /// `conjugation_polys[k - 1]` is V_k reduced mod P_r.
    conjugation_polys: Vec<IntPoly>,
    /// Exponent m with disc(P_r) = ± r^m.
    disc_exponent: u32,
    disc_sign: i8,
    /// Auxiliary prime modulo which P_r was certified irreducible.
    irreducibility_witness: u64,
}

/// The sequence V_0, …, V_n of the recurrence, unreduced.
fn chebyshev_sequence(n: usize) -> Vec<IntPoly> {
    let mut v = vec![IntPoly::from_i64(&[2]), IntPoly::x()];
    while v.len() <= n {
        let k = v.len();
        let next = &(&IntPoly::x() * &v[k - 1]) - &v[k - 2];
        v.push(next);
    }
    v.truncate(n + 1);
    v
}

/// P_r = 1 + V_1 + … + V_{(r-1)/2}.
pub fn minimal_polynomial(r: u64) -> IntPoly {
    let d = ((r - 1) / 2) as usize;
    chebyshev_sequence(d)
        .iter()
        .skip(1)
        .fold(IntPoly::one(), |acc, v| &acc + v)
}

pub fn build_field(r: u64) -> Result<Field> {
    if !is_prime_u64(r) {
        return Err(Error::NotPrime(r.to_string()));
    }
    if r < 5 {
        return Err(Error::ConductorTooSmall(r));
    }
    let d = ((r - 1) / 2) as usize;
    let vs = chebyshev_sequence(d);
    let min_poly = vs.iter().skip(1).fold(IntPoly::one(), |acc, v| &acc + v);
    assert!(min_poly.is_monic() && min_poly.degree() == Some(d));
    assert_eq!(min_poly.eval(&BigInt::from(2)), BigInt::from(r));
    assert!(min_poly.eval(&BigInt::from(-2)).abs().is_one());

    let conjugation_polys = vs[1..]
        .iter()
        .map(|v| v.rem(&min_poly).expect("monic"))
        .collect();
    let irreducibility_witness = certify_irreducible(r, d, &min_poly);

    let mut field = RealCyclotomicField {
        r,
        d,
        min_poly,
        conjugation_polys,
        disc_exponent: 0,
        disc_sign: 1,
        irreducibility_witness,
    };
    let (sign, exponent) = field.discriminant_shape();
    field.disc_sign = sign;
    field.disc_exponent = exponent;
    Ok(Arc::new(field))
}

/// A prime ℓ whose class generates (Z/r)^*/{±1} keeps P_r irreducible mod ℓ,
/// which certifies irreducibility over Q.
fn certify_irreducible(r: u64, d: usize, min_poly: &IntPoly) -> u64 {
    let ell = (2u64..)
        .filter(|&l| l != r && is_prime_u64(l))
        .find(|&l| order_mod_plus_minus(l, r) == d as u64)
        .expect("Dirichlet guarantees a prime in every residue class");
    let reduced = min_poly.reduce_mod(ell);
    assert!(
        d == 1 || reduced.is_irreducible(),
        "P_{r} reducible mod {ell}: inconsistent construction"
    );
    ell
}

impl RealCyclotomicField {
    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    /// V_k reduced modulo P_r, for 1 ≤ k ≤ d.
    pub fn conjugation_poly(&self, k: usize) -> Result<&IntPoly> {
        self.check_index(k)?;
        Ok(&self.conjugation_polys[k - 1])
    }

    pub fn discriminant_sign(&self) -> i8 {
        self.disc_sign
    }

    pub fn discriminant_exponent(&self) -> u32 {
        self.disc_exponent
    }

    pub fn irreducibility_witness(&self) -> u64 {
        self.irreducibility_witness
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.d {
            return Err(Error::ConjugateIndex {
                index: k,
                degree: self.d,
            });
        }
        Ok(())
    }

    /// Reduces a coefficient vector of any length modulo P_r.
    fn reduce(&self, mut t: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.d;
        let p = self.min_poly.coeffs();
        if t.len() > d {
            for i in (d..t.len()).rev() {
                let c = std::mem::take(&mut t[i]);
                if c.is_zero() {
                    continue;
                }
                for k in 0..d {
                    t[i - d + k] -= &c * &p[k];
                }
            }
        }
        t.resize(d, BigInt::zero());
        t
    }

    fn mul_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); 2 * self.d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.reduce(out)
    }

    /// Matrix of multiplication by the integral vector `a`: column k holds
    /// the coordinates of a·θ^k.
    fn mult_matrix(&self, a: &[BigInt]) -> IntMatrix {
        let d = self.d;
        let p = self.min_poly.coeffs();
        let mut cols = Vec::with_capacity(d);
        let mut v = a.to_vec();
        for _ in 0..d {
            cols.push(v.clone());
            let top = v.pop().expect("d >= 1");
            v.insert(0, BigInt::zero());
            if !top.is_zero() {
                for k in 0..d {
                    v[k] -= &top * &p[k];
                }
            }
        }
        (0..d)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect()
    }

    fn discriminant_shape(&self) -> (i8, u32) {
        // disc(P) = (-1)^{d(d-1)/2} N(P'(θ)).
        let mut coords = self.min_poly.derivative().into_coeffs();
        coords.resize(self.d, BigInt::zero());
        let mut norm = determinant(&self.mult_matrix(&coords));
        if (self.d * (self.d - 1) / 2) % 2 == 1 {
            norm = -norm;
        }
        let sign = if norm.is_negative() { -1 } else { 1 };
        let mut mag = norm.abs();
        let e = strip_prime(&mut mag, self.r);
        assert!(
            mag.is_one(),
            "disc(P_{}) has prime factors other than r",
            self.r
        );
        (sign, e)
    }

    fn zero_vec(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.d]
    }
}

/// Constructors that hand out elements tied to a shared field.
pub trait FieldExt {
    fn element(&self, num: Vec<BigInt>, den: BigInt) -> Result<FieldElement>;
    fn from_i64s(&self, coords: &[i64]) -> FieldElement;
    fn from_int(&self, n: impl Into<BigInt>) -> FieldElement;
    fn from_rational(&self, q: &BigRational) -> FieldElement;
    fn zero(&self) -> FieldElement;
    fn one(&self) -> FieldElement;
    /// θ_j = ζ^j + ζ^{-j} for 1 ≤ j ≤ d.
    fn theta(&self, j: usize) -> Result<FieldElement>;
    fn from_poly(&self, poly: &IntPoly) -> FieldElement;
}

impl FieldExt for Field {
    fn element(&self, mut num: Vec<BigInt>, den: BigInt) -> Result<FieldElement> {
        if num.len() > self.d {
            return Err(Error::CoordinateCount {
                expected: self.d,
                got: num.len(),
            });
        }
        if den.is_zero() {
            return Err(Error::InverseOfZero);
        }
        num.resize(self.d, BigInt::zero());
        Ok(FieldElement::normalised(self.clone(), num, den))
    }

    fn from_i64s(&self, coords: &[i64]) -> FieldElement {
        let num = coords.iter().map(|&c| BigInt::from(c)).collect();
        self.element(num, BigInt::one()).expect("coordinate count")
    }

    fn from_int(&self, n: impl Into<BigInt>) -> FieldElement {
        let mut num = self.zero_vec();
        num[0] = n.into();
        FieldElement::normalised(self.clone(), num, BigInt::one())
    }

    fn from_rational(&self, q: &BigRational) -> FieldElement {
        let mut num = self.zero_vec();
        num[0] = q.numer().clone();
        FieldElement::normalised(self.clone(), num, q.denom().clone())
    }

    fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    fn theta(&self, j: usize) -> Result<FieldElement> {
        let v = self.conjugation_poly(j)?;
        Ok(self.from_poly(v))
    }

    fn from_poly(&self, poly: &IntPoly) -> FieldElement {
        let coords = self.reduce(poly.coeffs().to_vec());
        FieldElement::normalised(self.clone(), coords, BigInt::one())
    }
}

/// An element of K in power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElement {
    fn normalised(field: Field, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let g = num.iter().fold(den.clone(), |acc, c| acc.gcd(c));
        if !g.is_one() && !g.is_zero() {
            for c in num.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        }
        FieldElement { field, num, den }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Integral numerator coordinates (length d).
    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// The integral element den·x.
    pub fn numerator_element(&self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            num: self.num.clone(),
            den: BigInt::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// `Some(q)` when the element lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn same_field(&self, other: &FieldElement) {
        assert_eq!(
            self.field.r, other.field.r,
            "elements of different real cyclotomic fields"
        );
    }

    pub fn scale_int(&self, k: &BigInt) -> FieldElement {
        let num = self.num.iter().map(|c| c * k).collect();
        FieldElement::normalised(self.field.clone(), num, self.den.clone())
    }

    pub fn div_int(&self, k: &BigInt) -> FieldElement {
        assert!(!k.is_zero(), "division by zero");
        FieldElement::normalised(self.field.clone(), self.num.clone(), &self.den * k)
    }

    /// Norm N_{K/Q}: the determinant of multiplication, divided by den^d.
    pub fn norm(&self) -> BigRational {
        let det = determinant(&self.field.mult_matrix(&self.num));
        BigRational::new(det, self.den.pow(self.field.d as u32))
    }

    /// Norm of the integral numerator (an integer).
    pub fn numerator_norm(&self) -> BigInt {
        determinant(&self.field.mult_matrix(&self.num))
    }

    pub fn trace(&self) -> BigRational {
        let m = self.field.mult_matrix(&self.num);
        let t = (0..self.field.d).fold(BigInt::zero(), |acc, i| acc + &m[i][i]);
        BigRational::new(t, self.den.clone())
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::InverseOfZero);
        }
        let m = self.field.mult_matrix(&self.num);
        let mut rhs = self.field.zero_vec();
        rhs[0] = BigInt::one();
        let y = solve_rational(&m, &rhs).expect("nonzero elements are invertible");
        let den = y.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num = y
            .iter()
            .map(|q| q.numer() * (&den / q.denom()) * &self.den)
            .collect();
        Ok(FieldElement::normalised(self.field.clone(), num, den))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = self.field.one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Image under the automorphism θ ↦ θ_j.
    pub fn conjugate(&self, j: usize) -> Result<FieldElement> {
        let v = self.field.conjugation_poly(j)?;
        let image = self.field.from_poly(v);
        let mut acc = self.field.zero();
        for c in self.num.iter().rev() {
            acc = &acc * &image;
            acc.num[0] += c;
        }
        acc.den = self.den.clone();
        Ok(FieldElement::normalised(self.field.clone(), acc.num, acc.den))
    }

    /// Integral with norm ±1.
    pub fn is_unit(&self) -> bool {
        self.is_integral() && !self.is_zero() && self.numerator_norm().abs().is_one()
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.r == other.field.r && self.den == other.den && self.num == other.num
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.r.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

/// Canonical total order: by denominator, then coordinates from θ^0 upward.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .r
            .cmp(&other.field.r)
            .then_with(|| self.den.cmp(&other.den))
            .then_with(|| self.num.cmp(&other.num))
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.same_field(rhs);
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den + b * &self.den)
            .collect();
        FieldElement::normalised(self.field.clone(), num, &self.den * &rhs.den)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.same_field(rhs);
        let num = self.field.mul_coords(&self.num, &rhs.num);
        FieldElement::normalised(self.field.clone(), num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write_poly(f, self.num.clone(), "θ")
        } else if self.num.iter().filter(|c| !c.is_zero()).count() == 1 {
            write_poly(f, self.num.clone(), "θ")?;
            write!(f, "/{}", self.den)
        } else {
            write!(f, "(")?;
            write_poly(f, self.num.clone(), "θ")?;
            write!(f, ")/{}", self.den)
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement[r={}]({})", self.field.r, self)
    }
}

/// Serialized form: decimal strings, since coordinates are unbounded.
#[derive(Clone, Debug, Serialize, serde::Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ElementRepr {
    pub num: Vec<String>,
    pub den: String,
    pub text: String,
}

impl From<&FieldElement> for ElementRepr {
    fn from(x: &FieldElement) -> Self {
        ElementRepr {
            num: x.num.iter().map(|c| c.to_string()).collect(),
            den: x.den.to_string(),
            text: x.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaFamily {
    ThetaUnit,
    ThetaPlusTwoUnit,
    ThetaMinusTwoNorm,
    ThetaDifferenceNorm,
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaCheck {
    pub family: LemmaFamily,
    pub j: usize,
    pub k: Option<usize>,
    pub norm: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaReport {
    pub r: u64,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Norm checks for the unit and ramification identities of θ_j:
/// θ_j and θ_j + 2 are units, while θ_j - 2 and θ_j - θ_k have norm ±r.
pub fn verify_lemma_cycl(field: &Field) -> LemmaReport {
    let d = field.degree();
    let r = BigInt::from(field.r());
    let two = field.from_int(2);
    let thetas: Vec<FieldElement> = (1..=d).map(|j| field.theta(j).unwrap()).collect();
    let mut checks = Vec::new();
    let check = |family, j, k, x: &FieldElement, target: &BigInt| {
        let n = x.norm();
        LemmaCheck {
            family,
            j,
            k,
            norm: n.to_string(),
            passed: x.is_integral() && n.is_integer() && n.to_integer().abs() == *target,
        }
    };
    let one = BigInt::one();
    for (i, t) in thetas.iter().enumerate() {
        let j = i + 1;
        checks.push(check(LemmaFamily::ThetaUnit, j, None, t, &one));
        checks.push(check(LemmaFamily::ThetaPlusTwoUnit, j, None, &(t + &two), &one));
        checks.push(check(LemmaFamily::ThetaMinusTwoNorm, j, None, &(t - &two), &r));
    }
    for j in 1..=d {
        for k in j + 1..=d {
            let diff = &thetas[j - 1] - &thetas[k - 1];
            checks.push(check(LemmaFamily::ThetaDifferenceNorm, j, Some(k), &diff, &r));
        }
    }
    LemmaReport {
        r: field.r(),
        checks,
    }
}
