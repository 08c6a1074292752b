use std::fmt;

use jlt_core::JlError;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Pass = 0,
    StatisticalFail = 1,
    Usage = 2,
    Io = 3,
    Dimension = 4,
    Parse = 5,
}

#[derive(Debug)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn new(code: ExitCode, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(ExitCode::Usage, message)
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(ExitCode::Parse, message)
    }

    pub fn dim(message: impl Into<String>) -> Self {
        Self::new(ExitCode::Dimension, message)
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self::new(ExitCode::Io, format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<JlError> for CliError {
    fn from(e: JlError) -> Self {
        let code = match e {
            JlError::DimensionMismatch { .. } | JlError::IncompatibleSketch(_) => ExitCode::Dimension,
            JlError::InvalidParameter(_) | JlError::Domain(_) => ExitCode::Usage,
        };
        Self::new(code, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
