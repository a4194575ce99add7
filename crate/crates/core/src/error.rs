//! Error type shared by every module in the crate.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside the documented domain of the operation.
    #[error("parameter {name} = {value} outside domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: String,
        domain: &'static str,
    },

    /// Evaluation points must lie strictly inside the unit disk.
    #[error("evaluation point has |z| = {modulus} but must satisfy |z| < 1")]
    OutsideUnitDisk { modulus: String },

    /// The working precision could not certify the result; the offending
    /// quantity and the failed check are spelled out for the caller.
    #[error("insufficient precision: {detail}")]
    PrecisionInsufficient { detail: String },

    /// A table or series would exceed the configured memory/size ceiling.
    #[error("resource limit exceeded: {detail}")]
    ResourceExhausted { detail: String },

    /// Two series of different truncation orders cannot be compared.
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    /// A ratio's denominator was too close to zero to divide meaningfully.
    #[error("denominator magnitude {magnitude} too close to zero")]
    NearZeroDenominator { magnitude: String },

    /// Polynomial division left a nonzero remainder where exactness was required.
    #[error("polynomial division is not exact")]
    InexactDivision,

    /// A cache file failed validation (bad magic, checksum, or truncation).
    #[error("cache invalid: {reason}")]
    CacheInvalid { reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
