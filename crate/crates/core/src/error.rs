use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A Hilbert space would exceed the configured maximum dimension.
    #[error("dimension {requested} exceeds the maximum Hilbert dimension {max}")]
    Sizing { requested: usize, max: usize },

    /// An input violated an operation's numerical precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Shapes or subsystem layouts do not fit together.
    #[error("structural error: {0}")]
    Structural(String),

    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "integration failed: norm drift {drift:.3e} exceeds {limit:.1e} at dt = {dt:.6e}; \
         try dt <= {suggested_dt:.6e}"
    )]
    IntegrationFailure {
        drift: f64,
        limit: f64,
        dt: f64,
        suggested_dt: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
