use thiserror::Error;

/// Errors raised by series construction and identity evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("infinite product does not truncate: {0}")]
    NonTruncating(String),
    #[error("non-integral exponent {0}/2")]
    NonIntegerExponent(i64),
    #[error("negative power of a cannot be evaluated at a = 0")]
    NegativeAPower,
    #[error("negative Pochhammer length {0} in a numerator")]
    NegativeLength(i64),
    #[error("unsupported parameters (d, k) = ({d}, {k})")]
    UnsupportedParams { d: i64, k: i64 },
    #[error("invalid family index (d, k, i) = ({d}, {k}, {i})")]
    InvalidIndex { d: i64, k: i64, i: i64 },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("summation over {0} does not terminate")]
    NonTerminatingSum(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("validation error at {line}:{col}: {msg}")]
    Validation { line: usize, col: usize, msg: String },
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
