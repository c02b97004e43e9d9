//! Frey curves Y² = X(X - A)(X + B) with A + B + C = 0 attached to a
//! descent witness, their invariants, reduction types and conductor data.
//!
//! Case r ∤ a: A = β_j, B = β·β_k, C = γ·a0² with
//!   β = -(θ_j - 2)/(θ_k - 2),  γ = 4(θ_j - θ_k)/(θ_k - 2).
//! The sign on β is the one that makes A + B + C vanish; the unsigned
//! quotient (θ_j - 2)/(θ_k - 2) is kept as `beta_displayed`.
//!
//! Case r | a: A = α·β_j, B = β·β_k, C = γ·a0² with
//!   α = 1/(θ_j - 2),  β = -1/(θ_k - 2),  γ = 4(θ_j - θ_k)/((θ_j - 2)(θ_k - 2)).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::descent::DescentWitness;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldExt};
use crate::ideal::{
    ideal_from_factors, prime_above_r, primes_above_two, split_prime, IdealHNF,
    PrimeIdealFactor, PrimeRepr,
};
use crate::numeric::integer::factor_integer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreyCase {
    RNdivA,
    RDivA,
}

impl FreyCase {
    pub fn as_str(self) -> &'static str {
        match self {
            FreyCase::RNdivA => "r_ndiv_a",
            FreyCase::RDivA => "r_div_a",
        }
    }
}

/// Exponent data that a genuine solution would carry: a = 2^n·(odd) with
/// A = a^p, and v_r(a) = k_r in the case r | a.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticExponents {
    pub p: u64,
    pub n: u32,
    pub k_r: u32,
}

#[derive(Clone, Debug)]
pub struct FreyParameters {
    pub field: Field,
    pub case: FreyCase,
    pub j: usize,
    pub k: usize,
    pub witness: DescentWitness,
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub beta_displayed: FieldElement,
    pub gamma: FieldElement,
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub exponents: SyntheticExponents,
    /// (k_r·p - 1)(r - 1) - 1, only in the case r | a.
    pub delta: Option<i64>,
}

impl FreyParameters {
    pub fn beta_j(&self) -> &FieldElement {
        self.witness.beta(self.j)
    }

    pub fn beta_k(&self) -> &FieldElement {
        self.witness.beta(self.k)
    }

    pub fn a0_squared(&self) -> FieldElement {
        self.field.from_int(&self.witness.a0 * &self.witness.a0)
    }

    pub fn sum_vanishes(&self) -> bool {
        (&(&self.a + &self.b) + &self.c).is_zero()
    }

    /// (θ_k - 2)β_j - (θ_j - 2)β_k + 4(θ_j - θ_k)a0², which must vanish.
    pub fn linear_identity_residual(&self) -> FieldElement {
        let two = self.field.from_int(2);
        let tj = self.field.theta(self.j).unwrap();
        let tk = self.field.theta(self.k).unwrap();
        let lhs = &(&(&tk - &two) * self.beta_j()) - &(&(&tj - &two) * self.beta_k());
        let four = BigInt::from(4);
        &lhs + &(&(&tj - &tk) * &self.a0_squared()).scale_int(&four)
    }

    /// α·β_j + β_displayed·β_k + γ·a0² with the displayed β.
    pub fn displayed_sum(&self) -> FieldElement {
        &(&(&self.alpha * self.beta_j()) + &(&self.beta_displayed * self.beta_k()))
            + &(&self.gamma * &self.a0_squared())
    }

    /// v_2(a0) = p·n, as for a0 coming from a genuine solution.
    pub fn n_matches_witness(&self) -> bool {
        self.witness.v2_a0 == Some(self.exponents.p as u32 * self.exponents.n)
    }
}

pub fn frey_parameters(
    field: &Field,
    witness: &DescentWitness,
    j: usize,
    k: usize,
    case: FreyCase,
    exponents: SyntheticExponents,
) -> Result<FreyParameters> {
    if j == k {
        return Err(Error::EqualIndices(j));
    }
    let d = field.degree();
    for idx in [j, k] {
        if idx == 0 || idx > d {
            return Err(Error::ConjugateIndex { index: idx, degree: d });
        }
    }
    if witness.r != field.r() {
        return Err(Error::CaseMismatch(format!(
            "witness built for r = {}, field has r = {}",
            witness.r,
            field.r()
        )));
    }
    let divides = witness.r_divides_a();
    match (case, divides) {
        (FreyCase::RNdivA, true) => {
            return Err(Error::CaseMismatch(format!(
                "r = {} divides A = {}; use case r_div_a",
                witness.r, witness.a
            )))
        }
        (FreyCase::RDivA, false) => {
            return Err(Error::CaseMismatch(format!(
                "r = {} does not divide A = {}; use case r_ndiv_a",
                witness.r, witness.a
            )))
        }
        _ => {}
    }

    let two = field.from_int(2);
    let four = BigInt::from(4);
    let tj = field.theta(j)?;
    let tk = field.theta(k)?;
    let tj2 = &tj - &two;
    let tk2 = &tk - &two;
    let diff4 = (&tj - &tk).scale_int(&four);
    let (alpha, beta, beta_displayed, gamma, delta) = match case {
        FreyCase::RNdivA => {
            let shown = tj2.div(&tk2)?;
            let gamma = diff4.div(&tk2)?;
            (field.one(), -&shown, shown, gamma, None)
        }
        FreyCase::RDivA => {
            let beta = -&tk2.inverse()?;
            let gamma = diff4.div(&(&tj2 * &tk2))?;
            let delta = (exponents.k_r as i64 * exponents.p as i64 - 1) * (field.r() as i64 - 1) - 1;
            (tj2.inverse()?, beta.clone(), beta, gamma, Some(delta))
        }
    };
    let a0sq = field.from_int(&witness.a0 * &witness.a0);
    let a = &alpha * witness.beta(j);
    let b = &beta * witness.beta(k);
    let c = &gamma * &a0sq;
    Ok(FreyParameters {
        field: field.clone(),
        case,
        j,
        k,
        witness: witness.clone(),
        alpha,
        beta,
        beta_displayed,
        gamma,
        a,
        b,
        c,
        exponents,
        delta,
    })
}

#[derive(Clone, Debug)]
pub struct FreyCurve {
    pub params: FreyParameters,
    pub a2: FieldElement,
    pub a4: FieldElement,
    pub c4: FieldElement,
    pub delta: FieldElement,
    pub j_inv: FieldElement,
}

pub fn frey_curve(params: &FreyParameters) -> Result<FreyCurve> {
    let (a, b) = (&params.a, &params.b);
    // Weierstrass route: a2 = B - A, a4 = -AB, a1 = a3 = a6 = 0.
    let a2 = b - a;
    let a4 = -&(a * b);
    let b2 = a2.scale_int(&BigInt::from(4));
    let b4 = a4.scale_int(&BigInt::from(2));
    let b8 = -&(&a4 * &a4);
    let c4 = &(&b2 * &b2) - &b4.scale_int(&BigInt::from(24));
    let delta = &(-&(&(&b2 * &b2) * &b8)) - &(&(&b4 * &b4) * &b4).scale_int(&BigInt::from(8));
    if delta.is_zero() {
        return Err(Error::DegenerateCurve);
    }
    let j_inv = (&(&c4 * &c4) * &c4).div(&delta)?;
    Ok(FreyCurve {
        params: params.clone(),
        a2,
        a4,
        c4,
        delta,
        j_inv,
    })
}

impl FreyCurve {
    /// 2^4(α²β_j² - βγβ_k a0²) in the signed convention.
    pub fn c4_closed_form(&self) -> FieldElement {
        let p = &self.params;
        let aj = &p.alpha * p.beta_j();
        let t = &(&aj * &aj) - &(&(&p.beta * &p.gamma) * &(p.beta_k() * &p.a0_squared()));
        t.scale_int(&BigInt::from(16))
    }

    /// 2^4(αβγβ_jβ_k a0²)².
    pub fn delta_closed_form(&self) -> FieldElement {
        let p = &self.params;
        let prod = &(&(&p.alpha * &p.beta) * &p.gamma) * &(&(p.beta_j() * p.beta_k()) * &p.a0_squared());
        (&prod * &prod).scale_int(&BigInt::from(16))
    }

    pub fn j_delta_identity(&self) -> bool {
        &self.j_inv * &self.delta == &(&self.c4 * &self.c4) * &self.c4
    }

    /// Rational primes that can divide Δ: 2, r, and the primes of a0 and of
    /// N(β_j), N(β_k). Returns them with any unfactored residue.
    fn candidate_primes(&self) -> (Vec<u64>, Vec<BigInt>) {
        let p = &self.params;
        let mut primes = vec![2, p.field.r()];
        let mut unfactored = Vec::new();
        let mut absorb = |n: &BigInt| {
            if n.is_zero() {
                return;
            }
            let fac = factor_integer(n);
            primes.extend(fac.primes().map(|q| q.to_u64().expect("desk-scale prime")));
            unfactored.extend(fac.unfactored);
        };
        absorb(&p.witness.a0);
        absorb(&p.beta_j().numerator_norm());
        if p.beta_k().numerator_norm() != p.beta_j().numerator_norm() {
            absorb(&p.beta_k().numerator_norm());
        }
        primes.sort_unstable();
        primes.dedup();
        (primes, unfactored)
    }

    /// Every prime of O_K at which Δ has positive valuation, with v(Δ), v(c4).
    pub fn bad_primes(&self) -> Result<(Vec<(PrimeIdealFactor, i64, i64)>, Vec<BigInt>)> {
        let (primes, unfactored) = self.candidate_primes();
        let mut out = Vec::new();
        for ell in primes {
            for q in split_prime(&self.params.field, ell)? {
                let vd = q.valuation(&self.delta)?;
                if vd > 0 {
                    let vc = if self.c4.is_zero() { i64::MAX } else { q.valuation(&self.c4)? };
                    out.push((q, vd, vc));
                }
            }
        }
        Ok((out, unfactored))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionType {
    Good,
    Multiplicative,
    PotentiallyMultiplicative,
    Unknown,
}

/// Away from 2 the model is read directly; above 2 only v(j) is trusted.
pub fn classify_reduction(curve: &FreyCurve, q: &PrimeIdealFactor) -> Result<ReductionType> {
    if q.p() == 2 {
        let vj = if curve.j_inv.is_zero() { i64::MAX } else { q.valuation(&curve.j_inv)? };
        return Ok(if vj < 0 {
            ReductionType::PotentiallyMultiplicative
        } else {
            ReductionType::Unknown
        });
    }
    let vd = q.valuation(&curve.delta)?;
    if vd == 0 {
        return Ok(ReductionType::Good);
    }
    let vc = if curve.c4.is_zero() { i64::MAX } else { q.valuation(&curve.c4)? };
    Ok(if vc == 0 {
        ReductionType::Multiplicative
    } else {
        ReductionType::Unknown
    })
}

/// How v_q(Δ_q) is obtained when forming 𝔪_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum LevelModel {
    /// The witness's own valuations (minimal away from 2; -v(j) above 2).
    Witness,
    /// The valuations a genuine solution with the synthetic exponents would
    /// have: the p-th-power shape away from 2r, -v(j) = 4(pn - 1)v(2) above
    /// 2, and 2δ at 𝔯 in the case r | a.
    PthPower,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConductorEntry {
    pub prime: PrimeRepr,
    pub reduction: ReductionType,
    /// v_q(Δ_q) under the chosen level model; `None` when not determined.
    pub v_delta: Option<i64>,
    pub in_m_p: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelReport {
    pub case: FreyCase,
    pub p: u64,
    pub model: LevelModel,
    pub conductor: Vec<ConductorEntry>,
    pub level: Vec<PrimeRepr>,
    /// 𝔫_p equals 2O_K (case r ∤ a) or 2O_K·𝔯 (case r | a) as ideals.
    pub level_matches_expected: bool,
    /// Every prime above 2 certified by v(j) < 0.
    pub two_part_certified: bool,
    pub unfactored: Vec<String>,
}

pub fn conductor_and_level(curve: &FreyCurve, model: LevelModel) -> Result<LevelReport> {
    let params = &curve.params;
    let field = &params.field;
    let ex = params.exponents;
    let rprime = prime_above_r(field);

    let mut primes: Vec<PrimeIdealFactor> = primes_above_two(field);
    if params.case == FreyCase::RDivA {
        primes.push(rprime.clone());
    }
    let mut unfactored = Vec::new();
    // Factor a0, N(β_j) and N(β_k) one at a time: their product can hold
    // two large primes that rho will not separate within budget.
    let support = &params.a0_squared() * &(params.beta_j() * params.beta_k());
    if !support.is_zero() {
        let (candidates, rest) = curve.candidate_primes();
        for ell in candidates {
            for q in split_prime(field, ell)? {
                if q.valuation(&support)? != 0 {
                    primes.push(q);
                }
            }
        }
        unfactored.extend(rest.iter().map(|n| n.to_string()));
    }
    primes.sort();
    primes.dedup();

    let mut conductor = Vec::with_capacity(primes.len());
    let mut level_factors = Vec::new();
    let mut two_part_certified = true;
    for q in &primes {
        let reduction = classify_reduction(curve, q)?;
        let v_delta = if q.p() == 2 {
            match reduction {
                ReductionType::PotentiallyMultiplicative => Some(match model {
                    LevelModel::Witness => -q.valuation(&curve.j_inv)?,
                    LevelModel::PthPower => {
                        4 * (ex.p as i64 * ex.n as i64 - 1) * q.valuation(&field.from_int(2))?
                    }
                }),
                _ => {
                    two_part_certified = false;
                    None
                }
            }
        } else if *q == rprime && params.case == FreyCase::RDivA {
            match model {
                LevelModel::Witness => Some(q.valuation(&curve.delta)?),
                LevelModel::PthPower => params.delta.map(|d| 2 * d),
            }
        } else {
            let v = q.valuation(&curve.delta)?;
            match model {
                LevelModel::Witness => Some(v),
                LevelModel::PthPower => Some(ex.p as i64 * v),
            }
        };
        let in_m_p = v_delta.map(|v| v % ex.p as i64 == 0);
        if in_m_p != Some(true) {
            level_factors.push((q.clone(), 1));
        }
        conductor.push(ConductorEntry {
            prime: q.into(),
            reduction,
            v_delta,
            in_m_p,
        });
    }

    let level_ideal = ideal_from_factors(field, &level_factors);
    let mut expected = IdealHNF::principal(&field.from_int(2))?;
    if params.case == FreyCase::RDivA {
        expected = expected.mul(&rprime.ideal());
    }
    Ok(LevelReport {
        case: params.case,
        p: ex.p,
        model,
        conductor,
        level: level_factors.iter().map(|(q, _)| q.into()).collect(),
        level_matches_expected: level_ideal == expected,
        two_part_certified,
        unfactored,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JValuationReport {
    pub p: u64,
    pub n: u32,
    pub v2_a0: Option<u32>,
    pub prime: PrimeRepr,
    pub v_j: i64,
    pub predicted: i64,
    pub matches: bool,
    /// p ∤ v(j); only meaningful when p > v_P(2).
    pub p_not_dividing: bool,
    /// n ≥ 1 and v_2(a0) = p·n.
    pub within_hypothesis: bool,
}

/// v_P(j) against 4(1 - pn)·v_P(2) on a curve built from a witness.
pub fn j_valuation_check(curve: &FreyCurve, big_p: &PrimeIdealFactor) -> Result<JValuationReport> {
    let params = &curve.params;
    let ex = params.exponents;
    let v2 = big_p.valuation(&params.field.from_int(2))?;
    let v_j = big_p.valuation(&curve.j_inv)?;
    let predicted = 4 * (1 - ex.p as i64 * ex.n as i64) * v2;
    Ok(JValuationReport {
        p: ex.p,
        n: ex.n,
        v2_a0: params.witness.v2_a0,
        prime: big_p.into(),
        v_j,
        predicted,
        matches: v_j == predicted,
        p_not_dividing: v_j % ex.p as i64 != 0,
        within_hypothesis: ex.n >= 1 && params.n_matches_witness(),
    })
}

/// Odd a0 and the smallest admissible b0 > 0 for a prescribed 2-adic level:
/// a0 = 2^{pn}·u.
pub fn synthetic_witness(field: &Field, p: u64, n: u32, u: i64) -> Result<DescentWitness> {
    let a0 = BigInt::from(u) << (p as usize * n as usize);
    let mut b0 = BigInt::one();
    while !a0.gcd(&b0).is_one() || (&a0 + &b0).is_even() {
        b0 += 1;
    }
    DescentWitness::new(field, a0, b0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn ex(p: u64, n: u32) -> SyntheticExponents {
        SyntheticExponents { p, n, k_r: 1 }
    }

    #[test]
    fn identities_r5() {
        let k = build_field(5).unwrap();
        let w = DescentWitness::new(&k, 2, 3).unwrap();
        let fp = frey_parameters(&k, &w, 1, 2, FreyCase::RNdivA, ex(7, 0)).unwrap();
        assert!(fp.linear_identity_residual().is_zero());
        assert!(fp.sum_vanishes());
        assert!(!fp.displayed_sum().is_zero());
        let curve = frey_curve(&fp).unwrap();
        assert_eq!(curve.c4, curve.c4_closed_form());
        assert_eq!(curve.delta, curve.delta_closed_form());
        assert!(curve.j_delta_identity());
    }

    #[test]
    fn parameter_errors() {
        let k = build_field(5).unwrap();
        let w = DescentWitness::new(&k, 2, 3).unwrap();
        assert_eq!(
            frey_parameters(&k, &w, 1, 1, FreyCase::RNdivA, ex(7, 0)).unwrap_err(),
            Error::EqualIndices(1)
        );
        assert!(matches!(
            frey_parameters(&k, &w, 1, 2, FreyCase::RDivA, ex(7, 0)),
            Err(Error::CaseMismatch(_))
        ));
    }

    #[test]
    fn reduction_at_r() {
        let k = build_field(5).unwrap();
        let rr = prime_above_r(&k);
        let w = DescentWitness::new(&k, 2, 3).unwrap();
        let c = frey_curve(&frey_parameters(&k, &w, 1, 2, FreyCase::RNdivA, ex(7, 0)).unwrap()).unwrap();
        assert_eq!(classify_reduction(&c, &rr).unwrap(), ReductionType::Good);
        let w = DescentWitness::new(&k, 5, 2).unwrap();
        let c = frey_curve(&frey_parameters(&k, &w, 1, 2, FreyCase::RDivA, ex(7, 0)).unwrap()).unwrap();
        assert_eq!(classify_reduction(&c, &rr).unwrap(), ReductionType::Multiplicative);
    }

    #[test]
    fn unit_witness_conductor() {
        // b0 = 0 makes every β_j a unit, so only primes above 2 remain.
        let k = build_field(5).unwrap();
        let w = DescentWitness::new(&k, 1, 0).unwrap();
        let fp = frey_parameters(&k, &w, 1, 2, FreyCase::RNdivA, ex(7, 0)).unwrap();
        let c = frey_curve(&fp).unwrap();
        let rep = conductor_and_level(&c, LevelModel::PthPower).unwrap();
        assert_eq!(rep.conductor.len(), 1);
        assert_eq!(rep.conductor[0].prime.p, 2);
        assert!(rep.level_matches_expected);
    }

    #[test]
    fn zero_a0_is_degenerate() {
        let k = build_field(5).unwrap();
        let w = DescentWitness::new(&k, 0, 1).unwrap();
        let fp = frey_parameters(&k, &w, 1, 2, FreyCase::RDivA, ex(7, 0)).unwrap();
        assert_eq!(frey_curve(&fp).unwrap_err(), Error::DegenerateCurve);
    }

    #[test]
    fn j_valuation_r5() {
        let k = build_field(5).unwrap();
        let big_p = &primes_above_two(&k)[0];
        for (p, n, want) in [(5, 1, -16), (7, 1, -24), (5, 0, 4)] {
            let w = synthetic_witness(&k, p, n, 1).unwrap();
            let fp = frey_parameters(&k, &w, 1, 2, FreyCase::RNdivA, ex(p, n)).unwrap();
            let rep = j_valuation_check(&frey_curve(&fp).unwrap(), big_p).unwrap();
            assert_eq!(rep.v_j, want);
            assert!(rep.matches);
            assert_eq!(rep.within_hypothesis, n >= 1);
        }
    }

    #[test]
    fn levels_r5() {
        let k = build_field(5).unwrap();
        let w = DescentWitness::new(&k, 2, 3).unwrap();
        let c = frey_curve(&frey_parameters(&k, &w, 1, 2, FreyCase::RNdivA, ex(7, 0)).unwrap()).unwrap();
        let rep = conductor_and_level(&c, LevelModel::PthPower).unwrap();
        assert!(rep.level_matches_expected, "{rep:?}");
        // 61 splits in K_5; both primes above it divide the conductor.
        assert_eq!(rep.conductor.iter().filter(|e| e.prime.p == 61).count(), 2);
        let w = DescentWitness::new(&k, 5, 2).unwrap();
        let c = frey_curve(&frey_parameters(&k, &w, 1, 2, FreyCase::RDivA, ex(7, 0)).unwrap()).unwrap();
        let rep = conductor_and_level(&c, LevelModel::PthPower).unwrap();
        assert!(rep.level_matches_expected, "{rep:?}");
    }
}
