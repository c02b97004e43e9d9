use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use cyclofermat::criterion::{eligibility, load_narrow_class_table, scan_records, NarrowClassTable};
use cyclofermat::descent::{verify_descent, DescentWitness};
use cyclofermat::field::{verify_lemma_cycl, ElementRepr};
use cyclofermat::frey::{
    conductor_and_level, frey_curve, frey_parameters, j_valuation_check, FreyCase, LevelModel,
    SyntheticExponents,
};
use cyclofermat::ideal::{prime_above_r, primes_above_two, split_prime, verify_lemma_ideals};
use cyclofermat::numeric::integer::is_prime_u64;
use cyclofermat::sunit::{certify, default_generators, load_generators, SSpec};
use cyclofermat::{build_field, Error};

use crate::schema::{
    render, EligiblePayload, Envelope, ErrorPayload, FieldPayload, FreyIdentities, FreyPayload,
    LemmaPayload, ScanPayload, SplitPayload, Status, SCHEMA_VERSION,
};

#[derive(Debug, Parser)]
#[command(
    name = "cyclofermat",
    version,
    about = "Exact arithmetic in Q(zeta_r + zeta_r^-1) for the modular method on x^(2p) + y^(2q) = z^r"
)]
pub struct Cli {
    /// Emit the versioned JSON envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Narrow class number snapshot (CSV r,h_plus,source).
    #[arg(long, global = true, value_name = "PATH")]
    pub table: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal polynomial, degree and discriminant of K.
    Field { r: u64 },
    /// Factor pO_K into primes.
    Split { r: u64, p: u64 },
    /// Norms and ideals of θ_j, θ_j ± 2 and θ_j - θ_k.
    Lemma21 { r: u64 },
    /// (a0 + b0 i)^r and the factorization of A over K.
    #[command(allow_negative_numbers = true)]
    Descent { r: u64, a0: BigInt, b0: BigInt },
    /// Frey curve for the conjugate pair (j, k) of a descent witness.
    #[command(allow_negative_numbers = true)]
    Frey {
        r: u64,
        a0: BigInt,
        b0: BigInt,
        j: usize,
        k: usize,
        /// Defaults to whichever case the witness falls in.
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
        #[arg(long, default_value_t = 7)]
        p: u64,
        /// Defaults to v_2(a0) / p.
        #[arg(long)]
        n: Option<u32>,
        /// v_r(a) in the case r | a.
        #[arg(long = "kr", default_value_t = 1)]
        k_r: u32,
        #[arg(long, value_enum, default_value_t = ModelArg::PthPower)]
        model: ModelArg,
    },
    /// Bounded search for λ + μ = 1 in S-units.
    Sunit {
        r: u64,
        #[arg(long, value_enum)]
        set: SetArg,
        #[arg(long)]
        bound: u32,
        /// Generator file, one element per line as power-basis coordinates.
        #[arg(long, value_name = "FILE")]
        gens: Option<PathBuf>,
    },
    /// Eligibility record for one conductor.
    Eligible { r: u64 },
    /// Eligible conductors up to a bound.
    Scan {
        #[arg(long)]
        max: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CaseArg {
    #[value(name = "r_ndiv_a")]
    RNdivA,
    #[value(name = "r_div_a")]
    RDivA,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModelArg {
    #[value(name = "witness")]
    Witness,
    #[value(name = "pth_power")]
    PthPower,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SetArg {
    #[value(name = "2")]
    Two,
    #[value(name = "2r")]
    TwoR,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Field { .. } => "field",
            Command::Split { .. } => "split",
            Command::Lemma21 { .. } => "lemma21",
            Command::Descent { .. } => "descent",
            Command::Frey { .. } => "frey",
            Command::Sunit { .. } => "sunit",
            Command::Eligible { .. } => "eligible",
            Command::Scan { .. } => "scan",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub json: String,
    pub text: String,
}

fn outcome<T: Serialize>(command: &str, status: Status, payload: T, text: String) -> Outcome {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        status,
        payload,
    };
    Outcome {
        status,
        json: render(&env),
        text,
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    match dispatch(cli) {
        Ok(out) => out,
        Err(e) => outcome(
            name,
            Status::Error,
            ErrorPayload { message: e.to_string() },
            e.to_string(),
        ),
    }
}

fn table(cli: &Cli) -> Result<NarrowClassTable, Error> {
    match &cli.table {
        Some(p) => load_narrow_class_table(p),
        None => NarrowClassTable::from_env(),
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    let name = cli.command.name();
    match &cli.command {
        Command::Field { r } => {
            let k = build_field(*r)?;
            let sign = if k.discriminant_sign() < 0 { "-" } else { "" };
            let payload = FieldPayload {
                r: *r,
                degree: k.degree(),
                min_poly: k.min_poly().coeffs().iter().map(|c| c.to_string()).collect(),
                min_poly_text: k.min_poly().to_string(),
                discriminant: format!("{sign}{r}^{}", k.discriminant_exponent()),
                discriminant_sign: k.discriminant_sign(),
                discriminant_exponent: k.discriminant_exponent(),
                irreducibility_witness: k.irreducibility_witness(),
            };
            let text = format!(
                "P_{r} = {}\ndegree {}\ndisc = {}\nirreducible mod {}",
                payload.min_poly_text, payload.degree, payload.discriminant, payload.irreducibility_witness
            );
            Ok(outcome(name, Status::Ok, payload, text))
        }
        Command::Split { r, p } => {
            let k = build_field(*r)?;
            let factors = split_prime(&k, *p)?;
            let sum_ef: u64 = factors.iter().map(|q| q.e() as u64 * q.f() as u64).sum();
            let mut text = format!("{p}O_K in K_{r} (degree {}):\n", k.degree());
            for q in &factors {
                writeln!(text, "  {q} e={} f={} gen_poly={}", q.e(), q.f(), q.gen_poly()).unwrap();
            }
            write!(text, "sum ef = {sum_ef}").unwrap();
            let payload = SplitPayload {
                r: *r,
                p: *p,
                degree: k.degree(),
                factors: factors.iter().map(Into::into).collect(),
                sum_ef,
            };
            let status = Status::from_passed(sum_ef == k.degree() as u64);
            Ok(outcome(name, status, payload, text))
        }
        Command::Lemma21 { r } => {
            let k = build_field(*r)?;
            let norms = verify_lemma_cycl(&k);
            let ideals = verify_lemma_ideals(&k);
            let all_passed = norms.all_passed() && ideals.iter().all(|c| c.equals_prime_above_r);
            let failed = norms.checks.iter().filter(|c| !c.passed).count()
                + ideals.iter().filter(|c| !c.equals_prime_above_r).count();
            let text = format!(
                "K_{r}: {} norm checks, {} ideal checks, {failed} failed: {}",
                norms.checks.len(),
                ideals.len(),
                mark(all_passed)
            );
            let payload = LemmaPayload {
                r: *r,
                prime_above_r: (&prime_above_r(&k)).into(),
                norm_checks: norms.checks,
                ideal_checks: ideals,
                all_passed,
            };
            Ok(outcome(name, Status::from_passed(all_passed), payload, text))
        }
        Command::Descent { r, a0, b0 } => {
            let k = build_field(*r)?;
            let rep = verify_descent(&k, a0.clone(), b0.clone())?;
            let mut text = format!("(a0 + b0 i)^{r} = {} + ({})i, C = {}\n", rep.a, rep.b, rep.c);
            for (j, b) in rep.betas.iter().enumerate() {
                writeln!(text, "  beta_{} = {b}  v_r = {}", j + 1, rep.r_valuations[j]).unwrap();
            }
            writeln!(text, "A = a0 * prod beta_j: {}", mark(rep.product_identity)).unwrap();
            writeln!(text, "pairwise coprime away from r: {}", mark(rep.coprime_away_from_r)).unwrap();
            write!(text, "r-valuation pattern: {}", mark(rep.r_pattern_ok && rep.product_r_valuation_ok)).unwrap();
            let status = Status::from_passed(rep.all_passed());
            Ok(outcome(name, status, rep, text))
        }
        Command::Frey { r, a0, b0, j, k, case, p, n, k_r, model } => {
            frey(name, *r, a0, b0, (*j, *k), *case, (*p, *n, *k_r), *model)
        }
        Command::Sunit { r, set, bound, gens } => {
            let k = build_field(*r)?;
            let spec = match set {
                SetArg::Two => SSpec::S2,
                SetArg::TwoR => SSpec::S2r,
            };
            let genset = match gens {
                Some(path) => load_generators(&k, spec, path)?,
                None => default_generators(&k, spec)?,
            };
            let rep = certify(&genset, *bound)?;
            let mut text = format!(
                "K_{r}, S = {}, bound {bound}: {} generators, box {}, {} distinct lambda, {} orbits\n",
                spec.as_str(),
                rep.generators.len(),
                rep.box_size,
                rep.distinct_lambdas,
                rep.orbits.len()
            );
            for o in &rep.orbits {
                writeln!(text, "  {}", o.tag).unwrap();
            }
            writeln!(text, "valuation bound: {}", mark(rep.all_bounds_hold)).unwrap();
            writeln!(text, "v(lambda mu) disjunction: {}", mark(rep.all_disjunctions_hold)).unwrap();
            writeln!(text, "v(j) lower bound: {}", mark(rep.all_j_lower_bounds_hold)).unwrap();
            write!(text, "{}", cyclofermat::sunit::DISCLAIMER).unwrap();
            let status = Status::from_passed(rep.all_bounds_hold);
            Ok(outcome(name, status, rep, text))
        }
        Command::Eligible { r } => {
            let t = table(cli)?;
            let record = eligibility(*r, &t)?;
            let verdict = |v: Option<bool>| v.map_or("unknown".to_string(), |b| b.to_string());
            let mut text = format!(
                "r = {r}: two_inert = {}, h+ = {}, r mod 8 = {}\n",
                record.two_inert,
                record.h_plus.map_or("missing".to_string(), |h| h.to_string()),
                record.r_mod_8
            );
            writeln!(text, "case r ndiv a: {}", verdict(record.verdict_case_r_ndiv_a)).unwrap();
            writeln!(text, "case r | a: {}", verdict(record.verdict_case_r_div_a)).unwrap();
            write!(text, "eligible: {}", verdict(record.overall)).unwrap();
            for reason in &record.reasons {
                write!(text, "\n  {reason}").unwrap();
            }
            let payload = EligiblePayload {
                table: t.origin().to_string(),
                record,
            };
            Ok(outcome(name, Status::Ok, payload, text))
        }
        Command::Scan { max } => {
            let t = table(cli)?;
            let records = scan_records(*max, &t)?;
            let eligible: Vec<u64> = records
                .iter()
                .filter(|rec| rec.overall == Some(true))
                .map(|rec| rec.r)
                .collect();
            let list: Vec<String> = eligible.iter().map(u64::to_string).collect();
            let text = format!("{} eligible r <= {max}: {}", eligible.len(), list.join(", "));
            let payload = ScanPayload {
                r_max: *max,
                table: t.origin().to_string(),
                eligible,
                records,
            };
            Ok(outcome(name, Status::Ok, payload, text))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn frey(
    name: &str,
    r: u64,
    a0: &BigInt,
    b0: &BigInt,
    (j, k): (usize, usize),
    case: Option<CaseArg>,
    (p, n, k_r): (u64, Option<u32>, u32),
    model: ModelArg,
) -> Result<Outcome, Error> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(format!("p = {p}")));
    }
    let field = build_field(r)?;
    let w = DescentWitness::new(&field, a0.clone(), b0.clone())?;
    let case = match case {
        Some(CaseArg::RNdivA) => FreyCase::RNdivA,
        Some(CaseArg::RDivA) => FreyCase::RDivA,
        None if w.r_divides_a() => FreyCase::RDivA,
        None => FreyCase::RNdivA,
    };
    let n = n.unwrap_or_else(|| w.v2_a0.unwrap_or(0) / p as u32);
    let exponents = SyntheticExponents { p, n, k_r };
    let params = frey_parameters(&field, &w, j, k, case, exponents)?;
    let curve = frey_curve(&params)?;
    let model = match model {
        ModelArg::Witness => LevelModel::Witness,
        ModelArg::PthPower => LevelModel::PthPower,
    };
    let level = conductor_and_level(&curve, model)?;
    let j_valuations = if curve.j_inv.is_zero() {
        Vec::new()
    } else {
        primes_above_two(&field)
            .iter()
            .map(|q| j_valuation_check(&curve, q))
            .collect::<Result<Vec<_>, _>>()?
    };
    let identities = FreyIdentities {
        sum_vanishes: params.sum_vanishes(),
        displayed_sum_vanishes: params.displayed_sum().is_zero(),
        linear_identity: params.linear_identity_residual().is_zero(),
        c4_closed_form: curve.c4 == curve.c4_closed_form(),
        discriminant_closed_form: curve.delta == curve.delta_closed_form(),
        j_discriminant: curve.j_delta_identity(),
    };

    let mut text = format!("K_{r}, witness ({a0}, {b0}), pair ({j}, {k}), case {}\n", case.as_str());
    writeln!(text, "A = {}\nB = {}\nC = {}", params.a, params.b, params.c).unwrap();
    writeln!(text, "c4 = {}\nDelta = {}\nj = {}", curve.c4, curve.delta, curve.j_inv).unwrap();
    writeln!(text, "A + B + C = 0: {}", mark(identities.sum_vanishes)).unwrap();
    writeln!(text, "closed forms for c4, Delta: {}", mark(identities.c4_closed_form && identities.discriminant_closed_form)).unwrap();
    writeln!(text, "j Delta = c4^3: {}", mark(identities.j_discriminant)).unwrap();
    writeln!(text, "reduction (p = {p}, n = {n}):").unwrap();
    for e in &level.conductor {
        let vd = e.v_delta.map_or("?".to_string(), |v| v.to_string());
        writeln!(text, "  {} {:?} v(Delta_q) = {vd}", e.prime.generator, e.reduction).unwrap();
    }
    let lv: Vec<&str> = level.level.iter().map(|q| q.generator.as_str()).collect();
    write!(
        text,
        "level: {} (expected shape: {})",
        if lv.is_empty() { "(1)".to_string() } else { lv.join(" ") },
        mark(level.level_matches_expected)
    )
    .unwrap();

    let el = |x: &cyclofermat::FieldElement| ElementRepr::from(x);
    let payload = FreyPayload {
        r,
        a0: a0.to_string(),
        b0: b0.to_string(),
        j,
        k,
        case,
        exponents,
        delta_exponent: params.delta,
        alpha: el(&params.alpha),
        beta: el(&params.beta),
        beta_displayed: el(&params.beta_displayed),
        gamma: el(&params.gamma),
        a: el(&params.a),
        b: el(&params.b),
        c: el(&params.c),
        c4: el(&curve.c4),
        discriminant: el(&curve.delta),
        j_invariant: el(&curve.j_inv),
        identities,
        level,
        j_valuations,
    };
    let status = Status::from_passed(payload.identities.all_hold());
    Ok(outcome(name, status, payload, text))
}
