use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("interval [{a}, {b}] is not a valid interval within [0, {n}]")]
    InvalidInterval { a: usize, b: usize, n: usize },
    #[error("exponent p = {0} must be a finite number >= 1")]
    InvalidExponent(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("invalid knots: {0}")]
    InvalidKnots(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
