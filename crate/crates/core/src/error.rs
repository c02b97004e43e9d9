use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("conductor must be a prime r >= 5, got {0}")]
    ConductorTooSmall(u64),

    #[error("integer polynomial division requires monic divisor")]
    NonMonicDivisor,

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,

    #[error("conjugate index {index} out of range 1..={degree}")]
    ConjugateIndex { index: usize, degree: usize },

    #[error("inverse of zero")]
    InverseOfZero,

    #[error("valuation of zero undefined")]
    ValuationOfZero,

    #[error("zero ideal")]
    ZeroIdeal,

    #[error("element has {got} coordinates, field degree is {expected}")]
    CoordinateCount { expected: usize, got: usize },

    #[error("descent precondition violated: {0}")]
    DescentPrecondition(String),

    #[error("Frey parameters require distinct indices, got j = k = {0}")]
    EqualIndices(usize),

    #[error("case mismatch: {0}")]
    CaseMismatch(String),

    #[error("degenerate Frey curve: discriminant vanishes")]
    DegenerateCurve,

    #[error("S-unit precondition violated: {0}")]
    SUnitPrecondition(String),

    #[error("descent hypothesis requires s0 >= 5, got s0 = {0}")]
    DescentThreshold(i64),

    #[error("parity descent step needs v(1+nu) = 1 or v(1-nu) = 1 (got {0}, {1})")]
    ParityBranch(i64, i64),

    #[error("Legendre parameter must avoid 0 and 1")]
    LegendreDegenerate,

    #[error("generator {index} is not an S-unit")]
    NotSUnit { index: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("narrow class table has no entry for r = {0}")]
    MissingEntry(u64),

    #[error("narrow class table is missing primes {0:?}")]
    CoverageGap(Vec<u64>),
}
