use thiserror::Error;

pub type Result<T> = std::result::Result<T, JlError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JlError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("incompatible sketches: {0}")]
    IncompatibleSketch(String),
}

impl JlError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        JlError::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        JlError::Domain(msg.into())
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(JlError::DimensionMismatch { expected, found })
    }
}
