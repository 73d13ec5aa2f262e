use std::path::PathBuf;

/// Errors raised across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("missing coefficient {0}")]
    MissingCoefficient(String),
    #[error("regime refused: {0}")]
    Regime(String),
    #[error("refusing to enumerate {count} items (cap {cap})")]
    CapExceeded { count: String, cap: u64 },
    #[error("out of tiny-scale range: {0}")]
    TooLarge(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("certificate schema: {0}")]
    Schema(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
