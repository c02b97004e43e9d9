//! Eligibility of a conductor r: 2 inert in K, odd narrow class number,
//! and r ≢ 1 mod 8 for the case r | a. Narrow class numbers are ingested
//! from a CSV snapshot, never computed.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::two_inert_by_splitting;
use crate::numeric::integer::{is_prime_u64, primes_in_range};

pub const TABLE_ENV: &str = "CYCLOFERMAT_HPLUS_TABLE";

const SHIPPED: &str = include_str!("../data/narrow_class_numbers.csv");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub h_plus: u64,
    pub source: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NarrowClassTable {
    entries: BTreeMap<u64, TableEntry>,
    origin: String,
}

impl NarrowClassTable {
    /// Lines are `r,h_plus[,source]`; `#` starts a comment and an initial
    /// `r,h_plus,...` header is skipped.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut entries = BTreeMap::new();
        let mut seen_data = false;
        for rec in rdr.records() {
            let bad = |line: usize, message: String| Error::Parse {
                path: origin.to_string(),
                line,
                message,
            };
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                bad(line, e.to_string())
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            if rec.iter().all(str::is_empty) {
                continue;
            }
            if !seen_data && rec.get(0) == Some("r") {
                seen_data = true;
                continue;
            }
            seen_data = true;
            if rec.len() < 2 || rec.len() > 3 {
                return Err(bad(line, format!("expected r,h_plus[,source], got {} fields", rec.len())));
            }
            let r: u64 = rec[0]
                .parse()
                .map_err(|_| bad(line, format!("r = {:?} is not a positive integer", &rec[0])))?;
            if !is_prime_u64(r) {
                return Err(bad(line, format!("{r} is not prime")));
            }
            if r < 5 {
                return Err(bad(line, format!("conductor {r} is below 5")));
            }
            let h: i64 = rec[1]
                .parse()
                .map_err(|_| bad(line, format!("h_plus = {:?} is not an integer", &rec[1])))?;
            if h <= 0 {
                return Err(bad(line, format!("h_plus must be positive, got {h}")));
            }
            let source = rec.get(2).filter(|s| !s.is_empty()).map(str::to_string);
            let entry = TableEntry { h_plus: h as u64, source };
            if entries.insert(r, entry).is_some() {
                return Err(bad(line, format!("duplicate entry for r = {r}")));
            }
        }
        Ok(NarrowClassTable {
            entries,
            origin: origin.to_string(),
        })
    }

    pub fn shipped() -> Self {
        Self::parse(SHIPPED, "shipped").expect("shipped table parses")
    }

    /// The table named by `CYCLOFERMAT_HPLUS_TABLE`, else the shipped one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(TABLE_ENV) {
            Some(p) if !p.is_empty() => load_narrow_class_table(Path::new(&p)),
            _ => Ok(Self::shipped()),
        }
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn get(&self, r: u64) -> Option<&TableEntry> {
        self.entries.get(&r)
    }

    /// Parity of h⁺; a missing entry is an error, never a default.
    pub fn h_plus_odd(&self, r: u64) -> Result<bool> {
        self.get(r).map(|e| e.h_plus % 2 == 1).ok_or(Error::MissingEntry(r))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &TableEntry)> {
        self.entries.iter().map(|(r, e)| (*r, e))
    }
}

pub fn load_narrow_class_table(path: &Path) -> Result<NarrowClassTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    NarrowClassTable::parse(&text, &path.display().to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EligibilityRecord {
    pub r: u64,
    pub two_inert: bool,
    pub h_plus: Option<u64>,
    /// `None` when r has no table entry.
    pub h_plus_odd: Option<bool>,
    pub r_mod_8: u64,
    pub verdict_case_r_ndiv_a: Option<bool>,
    pub verdict_case_r_div_a: Option<bool>,
    pub overall: Option<bool>,
    pub reasons: Vec<String>,
}

pub fn eligibility(r: u64, table: &NarrowClassTable) -> Result<EligibilityRecord> {
    let two_inert = two_inert_by_splitting(r)?;
    let entry = table.get(r);
    let h_plus_odd = entry.map(|e| e.h_plus % 2 == 1);
    let r_mod_8 = r % 8;

    let mut reasons = Vec::new();
    if !two_inert {
        reasons.push("2 is not inert".to_string());
    }
    match entry {
        None => reasons.push("h+ missing from table".to_string()),
        Some(e) if e.h_plus % 2 == 0 => reasons.push(format!("h+ = {} is even", e.h_plus)),
        _ => {}
    }
    if r_mod_8 == 1 {
        reasons.push("r = 1 mod 8".to_string());
    }

    // Unknown parity leaves every verdict unknown, whatever else fails.
    let ndiv = h_plus_odd.map(|odd| two_inert && odd);
    let div = ndiv.map(|v| v && r_mod_8 != 1);
    let overall = ndiv.zip(div).map(|(x, y)| x && y);
    Ok(EligibilityRecord {
        r,
        two_inert,
        h_plus: entry.map(|e| e.h_plus),
        h_plus_odd,
        r_mod_8,
        verdict_case_r_ndiv_a: ndiv,
        verdict_case_r_div_a: div,
        overall,
        reasons,
    })
}

/// Records for every prime 5 ≤ r ≤ r_max, ascending. Every one must be in
/// the table.
pub fn scan_records(r_max: u64, table: &NarrowClassTable) -> Result<Vec<EligibilityRecord>> {
    let primes = primes_in_range(5, r_max);
    let missing: Vec<u64> = primes.iter().copied().filter(|r| table.get(*r).is_none()).collect();
    if !missing.is_empty() {
        return Err(Error::CoverageGap(missing));
    }
    primes.par_iter().map(|&r| eligibility(r, table)).collect()
}

pub fn scan(r_max: u64, table: &NarrowClassTable) -> Result<Vec<u64>> {
    Ok(scan_records(r_max, table)?
        .into_iter()
        .filter(|rec| rec.overall == Some(true))
        .map(|rec| rec.r)
        .collect())
}
