use thiserror::Error;

/// Errors raised across the certification library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension limit exceeded: {requested} entries requested, limit is {limit}")]
    DimensionLimit { requested: u128, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no certificate exists: {0}")]
    NoCertificate(String),

    #[error("unbounded query count: single-shot false positive probability is 1")]
    Unbounded,

    #[error("numerical integrity violated: {0}")]
    NumericalIntegrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
