//! Crate-wide error type.

use crate::line::LineId;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree {0} (need d >= 1)")]
    InvalidDegree(i64),

    #[error("degree {d} not supported here (need {need})")]
    UnsupportedDegree { d: u32, need: &'static str },

    #[error("index {value} out of range for R_{d}")]
    ResidueOutOfRange { value: u32, d: u32 },

    #[error("v-exponent c={c} inadmissible for d={d} (c must be odd when d is even)")]
    InvalidVExponent { c: u32, d: u32 },

    #[error("line {0} out of range for d={1}")]
    LineOutOfRange(LineId, u32),

    #[error("identical lines {0}; intersection is the whole line, not a point")]
    IdenticalLines(LineId),

    #[error("psi-fiber views exist only for strata 1 and 2")]
    UnsupportedView,

    #[error("plane pair is degenerate (rank < 2), not a line")]
    DegeneratePlanes,

    #[error("prime {p} is not congruent to 1 mod {m}")]
    InvalidPrime { p: u64, m: u32 },

    #[error("need at least 3 primes, got {0}")]
    TooFewPrimes(usize),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("family degree {found} does not match expected degree {expected}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("input family is not skew: {0} meets {1}")]
    NotSkew(LineId, LineId),

    #[error("construction failed for d={0}: no completion to 3d lines exists")]
    ConstructionFailed(u32),

    #[error("graph would have {vertices} vertices, above the cap of {cap}")]
    ResourceLimit { vertices: usize, cap: usize },

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
