use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("range violation: {0}")]
    RangeViolation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("oracle scope exceeded: {0}")]
    OracleScope(String),
}

pub type Result<T> = std::result::Result<T, Error>;
