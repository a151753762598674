use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("ideal error: {0}")]
    Ideal(String),
    #[error("search cap exceeded: {0}")]
    SearchCap(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("eta is not good: {0}")]
    NotGood(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
