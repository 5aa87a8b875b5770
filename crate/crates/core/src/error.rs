use std::io;

/// Errors produced by the decoding toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },

    #[error("invalid code distance {0}: must be odd and at least 3")]
    InvalidDistance(usize),

    #[error("residual has a nonzero syndrome; it is neither a stabilizer nor a logical operator")]
    ResidualNotInKernel,

    #[error("enumeration over 2^{dimension} elements exceeds the limit of 2^{limit}")]
    EnumerationLimit { dimension: usize, limit: usize },

    #[error("hard constraints are unsatisfiable")]
    Unsatisfiable,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("model violates hard constraint {constraint}")]
    ModelViolatesHard { constraint: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient data for threshold fit: {0}")]
    InsufficientData(String),

    #[error("degenerate threshold fit: {0}")]
    DegenerateFit(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { context, expected, found })
    }
}
