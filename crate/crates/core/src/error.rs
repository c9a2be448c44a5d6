use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid tensor: {0}")]
    InvalidTensor(String),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation requires even order, got m = {0}")]
    OddOrder(usize),

    #[error("invalid norm exponent: {0}")]
    InvalidExponent(String),

    #[error("tensor is not symmetric")]
    NotSymmetric,

    #[error("dimension {n} exceeds the enumeration cap {cap}")]
    DimensionCap { n: usize, cap: usize },

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("nonpositive divisor {name} = {value}")]
    NonpositiveDivisor { name: &'static str, value: f64 },

    #[error("generator failed: {0}")]
    Generator(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
