use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Domain(#[from] kraus_core::Error),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        CliError::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }

    /// 1 for domain validation failures, 2 for input, parse and IO failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
