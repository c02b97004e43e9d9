//! Versioned JSON envelope and the typed payload of every command.
//!
//! `validate` re-reads an emitted document into these types (unknown fields
//! rejected) and writes it back out; a conforming document comes back
//! byte-identical.

use serde::de::{DeserializeOwned, IgnoredAny};
use serde::{Deserialize, Serialize};

use cyclofermat::criterion::EligibilityRecord;
use cyclofermat::descent::DescentReport;
use cyclofermat::field::{ElementRepr, LemmaCheck};
use cyclofermat::frey::{FreyCase, JValuationReport, LevelReport, SyntheticExponents};
use cyclofermat::ideal::{IdealCheck, PrimeRepr};
use cyclofermat::sunit::CertificationReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Error => 2,
        }
    }

    pub fn from_passed(passed: bool) -> Self {
        if passed {
            Status::Ok
        } else {
            Status::Failed
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    pub status: Status,
    pub payload: T,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorPayload {
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldPayload {
    pub r: u64,
    pub degree: usize,
    /// Coefficients of P_r, constant term first.
    pub min_poly: Vec<String>,
    pub min_poly_text: String,
    pub discriminant: String,
    pub discriminant_sign: i8,
    pub discriminant_exponent: u32,
    pub irreducibility_witness: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitPayload {
    pub r: u64,
    pub p: u64,
    pub degree: usize,
    pub factors: Vec<PrimeRepr>,
    pub sum_ef: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaPayload {
    pub r: u64,
    pub prime_above_r: PrimeRepr,
    pub norm_checks: Vec<LemmaCheck>,
    pub ideal_checks: Vec<IdealCheck>,
    pub all_passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreyIdentities {
    pub sum_vanishes: bool,
    /// The same sum with the unsigned quotient in place of β.
    pub displayed_sum_vanishes: bool,
    pub linear_identity: bool,
    pub c4_closed_form: bool,
    pub discriminant_closed_form: bool,
    pub j_discriminant: bool,
}

impl FreyIdentities {
    pub fn all_hold(&self) -> bool {
        self.sum_vanishes
            && self.linear_identity
            && self.c4_closed_form
            && self.discriminant_closed_form
            && self.j_discriminant
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreyPayload {
    pub r: u64,
    pub a0: String,
    pub b0: String,
    pub j: usize,
    pub k: usize,
    pub case: FreyCase,
    pub exponents: SyntheticExponents,
    pub delta_exponent: Option<i64>,
    pub alpha: ElementRepr,
    pub beta: ElementRepr,
    pub beta_displayed: ElementRepr,
    pub gamma: ElementRepr,
    pub a: ElementRepr,
    pub b: ElementRepr,
    pub c: ElementRepr,
    pub c4: ElementRepr,
    pub discriminant: ElementRepr,
    pub j_invariant: ElementRepr,
    pub identities: FreyIdentities,
    pub level: LevelReport,
    pub j_valuations: Vec<JValuationReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EligiblePayload {
    pub table: String,
    pub record: EligibilityRecord,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanPayload {
    pub r_max: u64,
    pub table: String,
    pub eligible: Vec<u64>,
    pub records: Vec<EligibilityRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Head {
    schema_version: u32,
    command: String,
    status: Status,
    #[allow(dead_code)]
    payload: IgnoredAny,
}

pub fn render<T: Serialize>(env: &Envelope<T>) -> String {
    serde_json::to_string_pretty(env).expect("payloads serialize")
}

fn reparse<T: Serialize + DeserializeOwned>(text: &str) -> Result<String, String> {
    let env: Envelope<T> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    Ok(render(&env))
}

/// Checks a document against the schema and returns its canonical form.
pub fn validate(text: &str) -> Result<String, String> {
    let head: Head = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if head.schema_version != SCHEMA_VERSION {
        return Err(format!(
            "schema_version {} (expected {SCHEMA_VERSION})",
            head.schema_version
        ));
    }
    if head.status == Status::Error {
        return reparse::<ErrorPayload>(text);
    }
    match head.command.as_str() {
        "field" => reparse::<FieldPayload>(text),
        "split" => reparse::<SplitPayload>(text),
        "lemma21" => reparse::<LemmaPayload>(text),
        "descent" => reparse::<DescentReport>(text),
        "frey" => reparse::<FreyPayload>(text),
        "sunit" => reparse::<CertificationReport>(text),
        "eligible" => reparse::<EligiblePayload>(text),
        "scan" => reparse::<ScanPayload>(text),
        other => Err(format!("unknown command {other:?}")),
    }
}
