//! Gaussian-integer descent: A + Bi = (a0 + b0 i)^r and the factorization
//! A = a0·∏ β_j over K with β_j = (θ_j + 2)a0² + (θ_j - 2)b0².

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldExt};
use crate::ideal::{prime_above_r, IdealHNF, PrimeIdealFactor};
use crate::numeric::integer::{strip_prime, valuation_int};

/// (a0 + b0 i)^r by repeated squaring over Z[i].
pub fn gaussian_power(a0: &BigInt, b0: &BigInt, r: u64) -> (BigInt, BigInt) {
    let mul = |(a, b): (&BigInt, &BigInt), (c, d): (&BigInt, &BigInt)| (a * c - b * d, a * d + b * c);
    let mut acc = (BigInt::one(), BigInt::zero());
    let mut base = (a0.clone(), b0.clone());
    let mut e = r;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul((&acc.0, &acc.1), (&base.0, &base.1));
        }
        e >>= 1;
        if e > 0 {
            base = mul((&base.0, &base.1), (&base.0, &base.1));
        }
    }
    acc
}

fn check_admissible(a0: &BigInt, b0: &BigInt) -> Result<()> {
    if !a0.gcd(b0).is_one() {
        return Err(Error::DescentPrecondition(format!(
            "gcd({a0}, {b0}) must be 1"
        )));
    }
    if (a0 + b0).is_even() {
        return Err(Error::DescentPrecondition(format!(
            "{a0} and {b0} must have opposite parity"
        )));
    }
    Ok(())
}

pub fn beta_values(field: &Field, a0: &BigInt, b0: &BigInt) -> Result<Vec<FieldElement>> {
    check_admissible(a0, b0)?;
    let a2 = a0 * a0;
    let b2 = b0 * b0;
    let two = field.from_int(2);
    (1..=field.degree())
        .map(|j| {
            let t = field.theta(j)?;
            Ok(&(&t + &two).scale_int(&a2) + &(&t - &two).scale_int(&b2))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct DescentWitness {
    pub r: u64,
    pub a0: BigInt,
    pub b0: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub betas: Vec<FieldElement>,
    /// v_2(a0), or `None` for a0 = 0.
    pub v2_a0: Option<u32>,
}

impl DescentWitness {
    pub fn new(field: &Field, a0: impl Into<BigInt>, b0: impl Into<BigInt>) -> Result<Self> {
        let (a0, b0) = (a0.into(), b0.into());
        let betas = beta_values(field, &a0, &b0)?;
        let (a, b) = gaussian_power(&a0, &b0, field.r());
        let c = &a0 * &a0 + &b0 * &b0;
        let v2_a0 = (!a0.is_zero()).then(|| valuation_int(&a0, 2));
        Ok(DescentWitness {
            r: field.r(),
            a0,
            b0,
            a,
            b,
            c,
            betas,
            v2_a0,
        })
    }

    pub fn beta(&self, j: usize) -> &FieldElement {
        &self.betas[j - 1]
    }

    pub fn beta_product(&self) -> FieldElement {
        let field = self.betas[0].field().clone();
        self.betas.iter().fold(field.one(), |acc, b| &acc * b)
    }

    pub fn r_divides_a(&self) -> bool {
        self.a.is_multiple_of(&BigInt::from(self.r))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCoprimality {
    pub j: usize,
    pub k: usize,
    /// m with (β_j) + (β_k) = 𝔯^m, or `None` if another prime is shared.
    pub r_power: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescentReport {
    pub r: u64,
    pub a0: String,
    pub b0: String,
    pub a: String,
    pub b: String,
    pub c: String,
    pub betas: Vec<String>,
    pub v2_a0: Option<u32>,
    pub product_identity: bool,
    pub conjugate_consistency: bool,
    pub pairs: Vec<PairCoprimality>,
    pub coprime_away_from_r: bool,
    pub r_divides_a: bool,
    pub r_valuations: Vec<i64>,
    pub r_pattern_ok: bool,
    /// v_𝔯(∏β_j) with f(𝔯) = 1 must match v_r(A / a0).
    pub product_r_valuation_ok: bool,
}

impl DescentReport {
    pub fn all_passed(&self) -> bool {
        self.product_identity
            && self.conjugate_consistency
            && self.coprime_away_from_r
            && self.r_pattern_ok
            && self.product_r_valuation_ok
    }
}

/// (β_j) + (β_k) is 𝔯^m for some m, given as `Some(m)`; `None` otherwise.
fn sum_as_r_power(x: &FieldElement, y: &FieldElement, rprime: &PrimeIdealFactor) -> Option<u32> {
    let (ix, iy) = match (IdealHNF::principal(x), IdealHNF::principal(y)) {
        (Ok(a), Ok(b)) => (a, b),
        // A zero β only arises for a0 = b0 = 0, which is not admissible.
        _ => return None,
    };
    let sum = ix.add(&iy);
    let norm = sum.norm();
    if !norm.is_integer() {
        return None;
    }
    let mut n = norm.to_integer();
    let m = strip_prime(&mut n, rprime.p());
    (n.is_one() && sum == rprime.ideal().pow(m)).then_some(m)
}

pub fn verify_descent(field: &Field, a0: impl Into<BigInt>, b0: impl Into<BigInt>) -> Result<DescentReport> {
    let w = DescentWitness::new(field, a0, b0)?;
    let d = field.degree();
    let rprime = prime_above_r(field);

    let product = w.beta_product();
    let product_identity = product.scale_int(&w.a0) == field.from_int(w.a.clone());
    let conjugate_consistency = (1..=d).all(|j| w.beta(1).conjugate(j).ok().as_ref() == Some(w.beta(j)));

    let mut pairs = Vec::new();
    for j in 1..=d {
        for k in j + 1..=d {
            pairs.push(PairCoprimality {
                j,
                k,
                r_power: sum_as_r_power(w.beta(j), w.beta(k), &rprime),
            });
        }
    }
    let coprime_away_from_r = pairs.iter().all(|p| p.r_power.is_some());

    let r_valuations: Vec<i64> = w
        .betas
        .iter()
        .map(|b| rprime.valuation(b))
        .collect::<Result<_>>()?;
    let r_divides_a = w.r_divides_a();
    let expected = if r_divides_a { 1 } else { 0 };
    let r_pattern_ok = r_valuations.iter().all(|&v| v == expected);

    let product_r_valuation_ok = if w.a0.is_zero() {
        true
    } else {
        let v_prod: i64 = r_valuations.iter().sum();
        let quotient = &w.a / &w.a0;
        let v_rat = if quotient.is_zero() {
            None
        } else {
            Some(valuation_int(&quotient, field.r()) as i64)
        };
        (v_prod == 0 || v_prod == d as i64) && v_rat.map(|v| v * d as i64) == Some(v_prod)
    };

    Ok(DescentReport {
        r: w.r,
        a0: w.a0.to_string(),
        b0: w.b0.to_string(),
        a: w.a.to_string(),
        b: w.b.to_string(),
        c: w.c.to_string(),
        betas: w.betas.iter().map(|b| b.to_string()).collect(),
        v2_a0: w.v2_a0,
        product_identity,
        conjugate_consistency,
        pairs,
        coprime_away_from_r,
        r_divides_a,
        r_valuations,
        r_pattern_ok,
        product_r_valuation_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn powers() {
        assert_eq!(gaussian_power(&b(2), &b(3), 5), (b(122), b(-597)));
        assert_eq!(gaussian_power(&b(1), &b(0), 11), (b(1), b(0)));
        assert_eq!(gaussian_power(&b(5), &b(2), 5), (b(-1475), b(4282)));
    }

    #[test]
    fn betas_r5() {
        let k = build_field(5).unwrap();
        let bs = beta_values(&k, &b(2), &b(3)).unwrap();
        assert_eq!(bs[0], k.from_i64s(&[-10, 13]));
        let bs = beta_values(&k, &b(5), &b(2)).unwrap();
        assert_eq!(bs[0], k.from_i64s(&[42, 29]));
        assert_eq!(bs[0].norm(), num_rational::BigRational::from_integer(b(-295)));
        assert!(beta_values(&k, &b(3), &b(5)).is_err());
        assert!(beta_values(&k, &b(2), &b(4)).is_err());
    }

    #[test]
    fn reports_r5() {
        let k = build_field(5).unwrap();
        let rep = verify_descent(&k, 2, 3).unwrap();
        assert!(rep.all_passed());
        assert_eq!(rep.a, "122");
        assert_eq!(rep.r_valuations, vec![0, 0]);
        let rep = verify_descent(&k, 5, 2).unwrap();
        assert!(rep.all_passed());
        assert!(rep.r_divides_a);
        assert_eq!(rep.r_valuations, vec![1, 1]);
        assert_eq!(rep.pairs[0].r_power, Some(1));
    }
}
