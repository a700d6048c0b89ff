use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid `{field}`: {constraint}")]
    Validation { field: String, constraint: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("FRACQM_THREADS must be a positive integer, got {0:?}")]
    Threads(String),

    /// A point evaluation failed inside the library.
    #[error(transparent)]
    Library(#[from] fracqm::Error),
}

impl CliError {
    pub fn invalid(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.into(),
            constraint: constraint.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Non-convergence is exit 2; everything else is a usage problem.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(fracqm::Error::NonConvergence { .. }) | CliError::Library(fracqm::Error::NonAlternating { .. }) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
