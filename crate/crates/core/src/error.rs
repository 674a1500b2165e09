use defectwb_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DefectError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub type Result<T> = std::result::Result<T, DefectError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(DefectError::Domain(msg.into()))
}
