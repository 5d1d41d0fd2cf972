use std::process::ExitCode;

use tullock_genai::Error;

/// Every failure the CLI reports, each tied to one exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{0}")]
    NonConvergence(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::NonConvergence(_) => 2,
            CliError::Check(_) => 3,
            CliError::Io(_) => 4,
        })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::DimensionMismatch { .. } | Error::Singular(_) => {
                CliError::Config(e.to_string())
            }
            Error::NonConvergence { .. } | Error::CycleSuspected { .. } => {
                CliError::NonConvergence(e.to_string())
            }
            Error::Io(_) | Error::Csv(_) => CliError::Io(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
