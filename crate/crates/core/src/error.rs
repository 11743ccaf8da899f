use thiserror::Error;

/// Errors raised by construction, translation and I/O routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FqError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("odd Majorana monomial ({factors} factors) has no image in the even algebra")]
    OddParity { factors: usize },

    #[error("d_Ff must be odd ≥ 3 (got {0})")]
    InvalidBlockDistance(usize),

    #[error("mapping table failed validation: {0}")]
    TranscriptionInvalid(String),

    #[error("layout infeasible: {0}")]
    InfeasibleLayout(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("no corridor for sector operator: {0}")]
    NoCorridor(String),

    #[error("decoder consistency failure: {0}")]
    DecoderBug(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, FqError>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(FqError::DimensionMismatch { expected, found })
    }
}
