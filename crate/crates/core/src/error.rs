use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("series constant term is not invertible")]
    NotInvertible,
    #[error("series precondition violated: {0}")]
    SeriesDomain(&'static str),
    #[error("truncation order {have} too small, need at least {need}")]
    TruncationTooSmall { have: usize, need: usize },
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("insufficient samples: need at least {need}, got {have}")]
    InsufficientSamples { need: usize, have: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
