use thiserror::Error;

pub type Result<T, E = FfrError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FfrError {
    /// A model parameter violates its documented domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A channel profile, band plan or simulation setup is unusable.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A root finder, optimizer or quadrature rule failed to converge.
    #[error("numerical failure in {context}: {detail}")]
    Numerical { context: &'static str, detail: String },
}

impl FfrError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        FfrError::Parameter(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        FfrError::Config(msg.into())
    }

    pub(crate) fn numerical(context: &'static str, detail: impl Into<String>) -> Self {
        FfrError::Numerical { context, detail: detail.into() }
    }
}
