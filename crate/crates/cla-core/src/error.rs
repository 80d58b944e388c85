//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("ill-formed formula: {0}")]
    Formula(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid identity pattern: {0}")]
    Pattern(String),

    #[error("formula contains an aggregation; expected aggregation-free")]
    NotAggregationFree,

    #[error("aggregation over an empty index set (domain size too small for the assignment)")]
    EmptyAggregation,

    #[error("aggregator `{0}` is not eliminable (only min, max and am have a distribution-level eliminator)")]
    UnsupportedAggregator(String),

    #[error("invalid density: {0}")]
    Density(String),

    #[error("invalid density model: {0}")]
    Model(String),

    #[error("invalid assignment: {0}")]
    Assignment(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 for validation problems,
    /// 3 for numeric/runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) | Error::EmptyAggregation => 3,
            _ => 2,
        }
    }
}
