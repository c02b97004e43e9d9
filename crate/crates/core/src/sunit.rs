//! S-unit equation λ + μ = 1 for S = S_{K,2} or S_{K,2r}: generator sets,
//! bounded enumeration, the valuation bound at primes above 2, the
//! parity-descent step, and Legendre j-invariants.
//!
//! Membership in O_S^* is decided exactly: x = N/den is an S-unit iff every
//! prime of den and of N_{K/Q}(N) lies under S, because the ideal support
//! of an integral element lies over the primes dividing its norm.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ElementRepr, Field, FieldElement, FieldExt};
use crate::ideal::{prime_above_r, primes_above_two, PrimeIdealFactor, PrimeRepr};
use crate::numeric::integer::strip_prime;

pub const DISCLAIMER: &str = "bounded-search evidence, NOT a proof";

pub const FINITENESS_NOTE: &str = "the descent argument picks a solution with v_P(lambda') maximal, \
     which relies on finiteness of the solution set; a bounded search cannot reproduce that step";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SSpec {
    #[serde(rename = "S2")]
    S2,
    #[serde(rename = "S2r")]
    S2r,
}

impl SSpec {
    pub fn as_str(self) -> &'static str {
        match self {
            SSpec::S2 => "S2",
            SSpec::S2r => "S2r",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completeness {
    BestEffort,
    UserCertified,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub element: FieldElement,
    /// Valuations at `SUnitGeneratorSet::s_primes`, in order.
    pub valuations: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct SUnitGeneratorSet {
    pub field: Field,
    pub spec: SSpec,
    pub s_primes: Vec<PrimeIdealFactor>,
    pub generators: Vec<Generator>,
    pub completeness: Completeness,
}

fn s_primes(field: &Field, spec: SSpec) -> Vec<PrimeIdealFactor> {
    let mut s = primes_above_two(field);
    if spec == SSpec::S2r {
        s.push(prime_above_r(field));
    }
    s
}

/// Strips 2 (and r for S2r) from |n|; the remainder is 1 iff n is supported on S.
fn supported(n: &BigInt, r: u64, spec: SSpec) -> bool {
    if n.is_zero() {
        return false;
    }
    let mut m = n.abs();
    strip_prime(&mut m, 2);
    if spec == SSpec::S2r {
        strip_prime(&mut m, r);
    }
    m.is_one()
}

pub fn is_s_unit(x: &FieldElement, spec: SSpec) -> bool {
    let r = x.field().r();
    !x.is_zero() && supported(x.denominator(), r, spec) && supported(&x.numerator_norm(), r, spec)
}

impl SUnitGeneratorSet {
    fn from_elements(
        field: &Field,
        spec: SSpec,
        elements: Vec<FieldElement>,
        completeness: Completeness,
    ) -> Result<Self> {
        let s = s_primes(field, spec);
        let mut generators = Vec::with_capacity(elements.len());
        for (index, element) in elements.into_iter().enumerate() {
            if !is_s_unit(&element, spec) {
                return Err(Error::NotSUnit { index });
            }
            let valuations = s.iter().map(|q| q.valuation(&element)).collect::<Result<_>>()?;
            generators.push(Generator { element, valuations });
        }
        Ok(SUnitGeneratorSet {
            field: field.clone(),
            spec,
            s_primes: s,
            generators,
            completeness,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// -1, θ_j (j ≥ 2), θ_j + 2 (all j), 2, and θ_1 - 2 when 𝔯 ∈ S.
pub fn default_generators(field: &Field, spec: SSpec) -> Result<SUnitGeneratorSet> {
    let two = field.from_int(2);
    let d = field.degree();
    let mut elems = vec![field.from_int(-1)];
    for j in 2..=d {
        elems.push(field.theta(j)?);
    }
    for j in 1..=d {
        elems.push(&field.theta(j)? + &two);
    }
    elems.push(two.clone());
    if spec == SSpec::S2r {
        elems.push(&field.theta(1)? - &two);
    }
    SUnitGeneratorSet::from_elements(field, spec, elems, Completeness::BestEffort)
}

/// Generator file: one element per line, comma-separated power-basis
/// coordinates with an optional "/den"; '#' starts a comment. -1 is added
/// when absent.
pub fn load_generators(field: &Field, spec: SSpec, path: &Path) -> Result<SUnitGeneratorSet> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let elems = parse_generators(field, &text, &path.display().to_string())?;
    let minus_one = field.from_int(-1);
    let mut all = Vec::with_capacity(elems.len() + 1);
    if !elems.contains(&minus_one) {
        all.push(minus_one);
    }
    all.extend(elems);
    SUnitGeneratorSet::from_elements(field, spec, all, Completeness::UserCertified)
}

pub fn parse_generators(field: &Field, text: &str, source: &str) -> Result<Vec<FieldElement>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: source.to_string(),
            line: i + 1,
            message,
        };
        let (coords, den) = match line.split_once('/') {
            Some((c, d)) => (c, d.trim()),
            None => (line, "1"),
        };
        let den: BigInt = den
            .parse()
            .map_err(|_| err(format!("bad denominator {den:?}")))?;
        if den.is_zero() {
            return Err(err("zero denominator".into()));
        }
        let num = coords
            .split(',')
            .map(|c| {
                let c = c.trim();
                c.parse::<BigInt>()
                    .map_err(|_| err(format!("bad coordinate {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if num.len() > field.degree() {
            return Err(err(format!(
                "{} coordinates for a field of degree {}",
                num.len(),
                field.degree()
            )));
        }
        let x = field.element(num, den).map_err(|e| err(e.to_string()))?;
        if x.is_zero() {
            return Err(err("zero is not an S-unit".into()));
        }
        out.push(x);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub v_lambda: i64,
    pub v_mu: i64,
    pub limit: i64,
    pub holds: bool,
}

/// max(|v_P(λ)|, |v_P(μ)|) ≤ 4·v_P(2).
pub fn check_valuation_bound(
    lambda: &FieldElement,
    mu: &FieldElement,
    big_p: &PrimeIdealFactor,
) -> Result<BoundCheck> {
    if !(lambda + mu).is_one() {
        return Err(Error::SUnitPrecondition(format!("{lambda} + {mu} != 1")));
    }
    if lambda.is_zero() || mu.is_zero() {
        return Err(Error::SUnitPrecondition("lambda * mu must be nonzero".into()));
    }
    let v_lambda = big_p.valuation(lambda)?;
    let v_mu = big_p.valuation(mu)?;
    let limit = 4 * big_p.valuation(&lambda.field().from_int(2))?;
    Ok(BoundCheck {
        v_lambda,
        v_mu,
        limit,
        holds: v_lambda.abs().max(v_mu.abs()) <= limit,
    })
}

/// 2^8 (λ² - λ + 1)³ / (λ²(1 - λ)²).
pub fn legendre_j(lambda: &FieldElement) -> Result<FieldElement> {
    let field = lambda.field();
    let one = field.one();
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::LegendreDegenerate);
    }
    let t = &(&(lambda * lambda) - lambda) + &one;
    let num = &(&t * &t) * &t;
    let om = &one - lambda;
    let den = &(lambda * lambda) * &(&om * &om);
    Ok(num.div(&den)?.scale_int(&BigInt::from(256)))
}

/// 2^8 (1 - λμ)³ / (λμ)².
pub fn legendre_j_sym(lambda: &FieldElement, mu: &FieldElement) -> Result<FieldElement> {
    let lm = lambda * mu;
    if lm.is_zero() {
        return Err(Error::LegendreDegenerate);
    }
    let t = &lambda.field().one() - &lm;
    Ok((&(&t * &t) * &t).div(&(&lm * &lm))?.scale_int(&BigInt::from(256)))
}

/// {λ, 1/λ, 1-λ, 1/(1-λ), λ/(λ-1), (λ-1)/λ}, deduplicated and sorted.
pub fn legendre_orbit(lambda: &FieldElement) -> Result<Vec<FieldElement>> {
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::LegendreDegenerate);
    }
    let one = lambda.field().one();
    let om = &one - lambda;
    let lm1 = lambda - &one;
    let mut v = vec![
        lambda.clone(),
        lambda.inverse()?,
        om.clone(),
        om.inverse()?,
        lambda.div(&lm1)?,
        lm1.div(lambda)?,
    ];
    v.sort();
    v.dedup();
    Ok(v)
}

#[derive(Clone, Debug)]
pub struct SUnitSolution {
    pub lambda: FieldElement,
    pub mu: FieldElement,
    /// Exponents over the generator set when λ itself was found in the box.
    pub exponents: Option<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct SolutionOrbit {
    pub tag: String,
    pub members: Vec<SUnitSolution>,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub box_size: u128,
    /// Distinct λ found in the box, sorted, with their smallest exponent vector.
    pub hits: Vec<(FieldElement, Vec<i64>)>,
    /// Closure of the hits under the six-element symmetry, one entry per orbit.
    pub orbits: Vec<SolutionOrbit>,
}

fn exponent_ranges(genset: &SUnitGeneratorSet, bound: i64) -> Vec<(i64, i64)> {
    let minus_one = genset.field.from_int(-1);
    genset
        .generators
        .iter()
        .map(|g| if g.element == minus_one { (0, 1) } else { (-bound, bound) })
        .collect()
}

/// Preference order among exponent vectors reaching the same λ.
fn exponent_key(e: &[i64]) -> (i64, Vec<i64>) {
    (e.iter().map(|x| x.abs()).sum(), e.to_vec())
}

/// Every λ = ∏ g_i^{e_i} in the box with 1 - λ an S-unit.
pub fn enumerate_solutions(genset: &SUnitGeneratorSet, bound: u32) -> Result<Enumeration> {
    if bound == 0 {
        return Err(Error::SUnitPrecondition("exponent bound must be >= 1".into()));
    }
    let field = &genset.field;
    let ranges = exponent_ranges(genset, bound as i64);
    let m = ranges.len();
    let box_size: u128 = ranges.iter().map(|(lo, hi)| (hi - lo + 1) as u128).product();

    let mut powers: Vec<Vec<FieldElement>> = Vec::with_capacity(m);
    for (g, &(lo, hi)) in genset.generators.iter().zip(&ranges) {
        powers.push((lo..=hi).map(|e| g.element.pow(e)).collect::<Result<_>>()?);
    }

    // Parallel over the last generator's exponent; odometer over the rest.
    let top = m - 1;
    let (tlo, thi) = ranges[top];
    let found: Vec<(FieldElement, Vec<i64>)> = (tlo..=thi)
        .into_par_iter()
        .flat_map_iter(|etop| {
            let mut hits = Vec::new();
            let mut exps: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            exps[top] = etop;
            let mut partial = vec![field.one(); m + 1];
            partial[top] = powers[top][(etop - tlo) as usize].clone();
            for i in (0..top).rev() {
                partial[i] = &partial[i + 1] * &powers[i][0];
            }
            let one = field.one();
            loop {
                let lambda = &partial[0];
                if !lambda.is_one() && is_s_unit(&(&one - lambda), genset.spec) {
                    hits.push((lambda.clone(), exps.clone()));
                }
                // Advance the odometer on digits 0..top.
                let mut i = 0;
                while i < top {
                    if exps[i] < ranges[i].1 {
                        exps[i] += 1;
                        break;
                    }
                    exps[i] = ranges[i].0;
                    i += 1;
                }
                if i == top {
                    break;
                }
                for k in (0..=i).rev() {
                    let idx = (exps[k] - ranges[k].0) as usize;
                    partial[k] = &partial[k + 1] * &powers[k][idx];
                }
            }
            hits
        })
        .collect();

    let mut best: BTreeMap<FieldElement, Vec<i64>> = BTreeMap::new();
    for (lambda, e) in found {
        match best.get(&lambda) {
            Some(prev) if exponent_key(prev) <= exponent_key(&e) => {}
            _ => {
                best.insert(lambda, e);
            }
        }
    }

    let mut orbits = Vec::new();
    let mut covered: std::collections::BTreeSet<FieldElement> = Default::default();
    for lambda in best.keys() {
        if covered.contains(lambda) {
            continue;
        }
        let orbit = legendre_orbit(lambda)?;
        let one = field.one();
        let members: Vec<SUnitSolution> = orbit
            .iter()
            .map(|x| SUnitSolution {
                lambda: x.clone(),
                mu: &one - x,
                exponents: best.get(x).cloned(),
            })
            .collect();
        let tag = format!(
            "{{{}}}",
            orbit.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        );
        covered.extend(orbit);
        orbits.push(SolutionOrbit { tag, members });
    }

    Ok(Enumeration {
        box_size,
        hits: best.into_iter().collect(),
        orbits,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeCheck {
    pub prime: PrimeRepr,
    pub v_lambda: i64,
    pub v_mu: i64,
    pub limit: i64,
    pub bound_holds: bool,
    /// v_P(λμ) ∈ {t, -2t} with t = max(|v_P(λ)|, |v_P(μ)|).
    pub disjunction_holds: bool,
    pub v_j: Option<i64>,
    /// v_P(j) ≥ 8·v_P(2) - 2t.
    pub j_lower_bound_holds: bool,
    /// v_P(j) ≥ 0, the consequence of the bound.
    pub j_nonnegative: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionReport {
    pub lambda: ElementRepr,
    pub mu: ElementRepr,
    pub exponents: Option<Vec<i64>>,
    pub s_unit_verified: bool,
    pub checks: Vec<PrimeCheck>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitReport {
    pub tag: String,
    pub members: Vec<SolutionReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificationReport {
    pub r: u64,
    pub s: SSpec,
    pub bound: u32,
    pub completeness: Completeness,
    pub generators: Vec<ElementRepr>,
    pub box_size: String,
    pub distinct_lambdas: usize,
    pub orbits: Vec<OrbitReport>,
    pub all_bounds_hold: bool,
    pub all_disjunctions_hold: bool,
    pub all_j_lower_bounds_hold: bool,
    pub disclaimer: Option<String>,
    pub notes: Vec<String>,
}

fn prime_check(sol: &SUnitSolution, big_p: &PrimeIdealFactor) -> Result<PrimeCheck> {
    let b = check_valuation_bound(&sol.lambda, &sol.mu, big_p)?;
    let v2 = big_p.valuation(&sol.lambda.field().from_int(2))?;
    let t = b.v_lambda.abs().max(b.v_mu.abs());
    let vlm = b.v_lambda + b.v_mu;
    let j = legendre_j_sym(&sol.lambda, &sol.mu)?;
    let v_j = if j.is_zero() { None } else { Some(big_p.valuation(&j)?) };
    // j = 0 has infinite valuation and satisfies every lower bound.
    let lower = v_j.map_or(true, |v| v >= 8 * v2 - 2 * t);
    Ok(PrimeCheck {
        prime: big_p.into(),
        v_lambda: b.v_lambda,
        v_mu: b.v_mu,
        limit: b.limit,
        bound_holds: b.holds,
        disjunction_holds: vlm == t || vlm == -2 * t,
        v_j,
        j_lower_bound_holds: lower,
        j_nonnegative: v_j.map_or(true, |v| v >= 0),
    })
}

pub fn evaluate_solution(
    genset: &SUnitGeneratorSet,
    sol: &SUnitSolution,
) -> Result<SolutionReport> {
    let checks = primes_above_two(&genset.field)
        .iter()
        .map(|p| prime_check(sol, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(SolutionReport {
        lambda: (&sol.lambda).into(),
        mu: (&sol.mu).into(),
        exponents: sol.exponents.clone(),
        s_unit_verified: (&sol.lambda + &sol.mu).is_one()
            && is_s_unit(&sol.lambda, genset.spec)
            && is_s_unit(&sol.mu, genset.spec),
        checks,
    })
}

pub fn certify(genset: &SUnitGeneratorSet, bound: u32) -> Result<CertificationReport> {
    let en = enumerate_solutions(genset, bound)?;
    let mut orbits = Vec::with_capacity(en.orbits.len());
    for o in &en.orbits {
        let members = o
            .members
            .iter()
            .map(|s| evaluate_solution(genset, s))
            .collect::<Result<Vec<_>>>()?;
        orbits.push(OrbitReport {
            tag: o.tag.clone(),
            members,
        });
    }
    let all = |f: &dyn Fn(&PrimeCheck) -> bool| {
        orbits
            .iter()
            .flat_map(|o| &o.members)
            .flat_map(|m| &m.checks)
            .all(f)
    };
    let all_bounds_hold = all(&|c| c.bound_holds);
    let all_disjunctions_hold = all(&|c| c.disjunction_holds);
    let all_j_lower_bounds_hold = all(&|c| c.j_lower_bound_holds);
    let disclaimer = (genset.completeness == Completeness::BestEffort).then(|| DISCLAIMER.to_string());
    let mut notes = vec![FINITENESS_NOTE.to_string()];
    if genset.completeness == Completeness::UserCertified {
        notes.push(format!(
            "generators supplied by the user; the search is still limited to the box [-{bound}, {bound}], so this is {DISCLAIMER}"
        ));
    }
    Ok(CertificationReport {
        r: genset.field.r(),
        s: genset.spec,
        bound,
        completeness: genset.completeness,
        generators: genset.generators.iter().map(|g| (&g.element).into()).collect(),
        box_size: en.box_size.to_string(),
        distinct_lambdas: en.hits.len(),
        orbits,
        all_bounds_hold,
        all_disjunctions_hold,
        all_j_lower_bounds_hold,
        disclaimer,
        notes,
    })
}

pub fn certify_field(field: &Field, spec: SSpec, bound: u32) -> Result<CertificationReport> {
    certify(&default_generators(field, spec)?, bound)
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityStep {
    pub nu: ElementRepr,
    pub lambda_prime: ElementRepr,
    pub s0: i64,
    pub s1: i64,
    pub s2: i64,
    pub lambda2: ElementRepr,
    pub mu2: ElementRepr,
    pub v_lambda2: i64,
    pub predicted: i64,
    pub sum_is_one: bool,
    /// s0 ≥ 5 was checked rather than skipped.
    pub threshold_checked: bool,
    #[serde(skip)]
    pub lambda2_elem: Option<FieldElement>,
    #[serde(skip)]
    pub mu2_elem: Option<FieldElement>,
}

/// The step λ' = 1 - ν² ↦ λ'' from the proof of the local criterion.
pub fn parity_descent_step(nu: &FieldElement, big_p: &PrimeIdealFactor) -> Result<ParityStep> {
    parity_step_inner(nu, big_p, true)
}

/// Same step with the s0 ≥ 5 threshold skipped, for illustrating what goes
/// wrong below it.
pub fn parity_descent_step_unchecked(nu: &FieldElement, big_p: &PrimeIdealFactor) -> Result<ParityStep> {
    parity_step_inner(nu, big_p, false)
}

fn parity_step_inner(nu: &FieldElement, big_p: &PrimeIdealFactor, check: bool) -> Result<ParityStep> {
    let field = nu.field();
    let one = field.one();
    if nu.is_zero() {
        return Err(Error::SUnitPrecondition("nu must be nonzero".into()));
    }
    let lambda_prime = &one - &(nu * nu);
    if lambda_prime.is_zero() {
        return Err(Error::SUnitPrecondition("nu^2 = 1 leaves lambda' = 0".into()));
    }
    let s0 = big_p.valuation(&lambda_prime)?;
    if check && s0 < 5 {
        return Err(Error::DescentThreshold(s0));
    }
    let plus = &one + nu;
    let minus = &one - nu;
    let s1 = big_p.valuation(&plus)?;
    let s2 = big_p.valuation(&minus)?;
    let four_nu = nu.scale_int(&BigInt::from(4));
    let a = (-&(&minus * &minus)).div(&four_nu)?;
    let b = (&plus * &plus).div(&four_nu)?;
    let (lambda2, mu2) = if s1 == 1 {
        (a, b)
    } else if s2 == 1 {
        (b, a)
    } else {
        return Err(Error::ParityBranch(s1, s2));
    };
    let v_lambda2 = big_p.valuation(&lambda2)?;
    Ok(ParityStep {
        nu: nu.into(),
        lambda_prime: (&lambda_prime).into(),
        s0,
        s1,
        s2,
        lambda2: (&lambda2).into(),
        mu2: (&mu2).into(),
        v_lambda2,
        predicted: 2 * s0 - 4,
        sum_is_one: (&lambda2 + &mu2).is_one(),
        threshold_checked: check,
        lambda2_elem: Some(lambda2),
        mu2_elem: Some(mu2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn q(k: &Field, n: i64, d: i64) -> FieldElement {
        k.from_int(n).div_int(&BigInt::from(d))
    }

    #[test]
    fn default_sets() {
        let k5 = build_field(5).unwrap();
        assert_eq!(default_generators(&k5, SSpec::S2).unwrap().len(), 5);
        assert_eq!(default_generators(&k5, SSpec::S2r).unwrap().len(), 6);
        let k7 = build_field(7).unwrap();
        let g = default_generators(&k7, SSpec::S2).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.generators.iter().filter(|g| g.element.is_unit()).count(), 6);
    }

    #[test]
    fn bound_examples() {
        let k = build_field(5).unwrap();
        let p = &primes_above_two(&k)[0];
        assert!(check_valuation_bound(&k.from_int(2), &k.from_int(-1), p).unwrap().holds);
        let b = check_valuation_bound(&q(&k, 1, 16), &q(&k, 15, 16), p).unwrap();
        assert!(b.holds);
        assert_eq!((b.v_lambda, b.v_mu, b.limit), (-4, -4, 4));
        assert!(!check_valuation_bound(&q(&k, 1, 32), &q(&k, 31, 32), p).unwrap().holds);
        assert!(check_valuation_bound(&k.from_int(2), &k.from_int(2), p).is_err());
    }

    #[test]
    fn legendre_values() {
        let k = build_field(5).unwrap();
        let target = k.from_int(1728);
        assert_eq!(legendre_j(&k.from_int(-1)).unwrap(), target);
        assert_eq!(legendre_j(&k.from_int(2)).unwrap(), target);
        assert_eq!(legendre_j(&q(&k, 1, 2)).unwrap(), target);
        assert_eq!(legendre_j(&k.one()).unwrap_err(), Error::LegendreDegenerate);
        let lam = &k.theta(1).unwrap() + &k.from_int(2);
        let mu = &k.one() - &lam;
        assert_eq!(mu, k.from_i64s(&[-1, -1]));
        assert_eq!(legendre_j(&lam).unwrap(), legendre_j_sym(&lam, &mu).unwrap());
    }

    #[test]
    fn enumeration_r5_contains_examples() {
        let k = build_field(5).unwrap();
        let g = default_generators(&k, SSpec::S2).unwrap();
        let en = enumerate_solutions(&g, 3).unwrap();
        let lambdas: Vec<&FieldElement> = en.hits.iter().map(|h| &h.0).collect();
        for want in [k.from_int(2), q(&k, 1, 2), &k.theta(1).unwrap() + &k.from_int(2)] {
            assert!(lambdas.contains(&&want), "missing {want}");
        }
        assert!(en.orbits.iter().any(|o| o.tag == "{-1, 2, 1/2}"));
    }

    #[test]
    fn parity_rational_probes() {
        let k = build_field(5).unwrap();
        let p = &primes_above_two(&k)[0];
        assert_eq!(
            parity_descent_step(&k.from_int(3), p).unwrap_err(),
            Error::DescentThreshold(3)
        );
        let forced = parity_descent_step_unchecked(&k.from_int(3), p).unwrap();
        assert_eq!(forced.lambda2_elem.unwrap(), q(&k, 4, 3));
        assert_eq!(forced.v_lambda2, 2);
        let step = parity_descent_step(&k.from_int(17), p).unwrap();
        assert_eq!((step.s0, step.v_lambda2), (5, 6));
        assert!(step.sum_is_one);
    }

    #[test]
    fn generator_file_parsing() {
        let k = build_field(5).unwrap();
        let v = parse_generators(&k, "# units\n0, 1\n1,1 # theta + 1\n1/2\n", "mem").unwrap();
        assert_eq!(v, vec![k.theta(1).unwrap(), k.from_i64s(&[1, 1]), q(&k, 1, 2)]);
        let e = parse_generators(&k, "1,2,3\n", "mem").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_generators(&k, "\n1, x\n", "mem").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }
}
