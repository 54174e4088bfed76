use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("leading entry has modulus {0:e}, cannot canonicalize")]
    ZeroLeadingEntry(f64),

    #[error("entry {index} has modulus {modulus}, outside unit tolerance {tol:e}")]
    NotUnitModulus { index: usize, modulus: f64, tol: f64 },

    #[error("sequence must not be empty")]
    EmptySequence,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),

    #[error("invalid family parameters: {0}")]
    InvalidSpec(String),

    #[error("decimation factor {m} is not coprime to length {n}")]
    BadDecimation { m: usize, n: usize },

    #[error("damped normal equations stayed singular after {retries} damping increases")]
    LinearAlgebraFailure { retries: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid search plan: {0}")]
    InvalidPlan(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
