use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violates the operation's precondition (bad prime, residue out of range, ...).
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// The request exceeds a configured or representable limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Malformed input data, e.g. a digit string violating its radix.
    #[error("validation failed: {0}")]
    Validation(String),
    /// A mathematical guarantee the construction relies on did not hold.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
