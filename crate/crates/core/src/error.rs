use thiserror::Error;

/// Errors produced by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("invalid tensor: {0}")]
    Tensor(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("invalid block: {0}")]
    Block(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid rational {0:?}: {1}")]
    Rational(String, String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("scale too large: {0}")]
    ScaleTooLarge(String),
    #[error("not irregular: {0}")]
    NotIrregular(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid distribution: {0}")]
    Distribution(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
