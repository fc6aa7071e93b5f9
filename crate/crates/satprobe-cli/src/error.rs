//! CLI error classification; the variant decides the process exit code.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag combinations. Exit code 1.
    #[error("{0}")]
    Usage(String),
    /// Missing, malformed, or inconsistent data. Exit code 2.
    #[error("{0}")]
    Data(String),
    /// Backend configuration or connectivity problems. Exit code 3.
    #[error("{0}")]
    Backend(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Backend(_) => 3,
        }
    }

    pub fn data(err: impl std::fmt::Display) -> Self {
        CliError::Data(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
