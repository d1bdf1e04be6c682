use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] qrisk::Error),

    #[error("cannot read `{path}`: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write `{path}`: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for invalid input, 3 for size or grid mismatches, 4 when a search
    /// exceeds its cap, 1 when output cannot be written.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_dimension_error() => 3,
            CliError::Library(qrisk::Error::SearchSpaceTooLarge { .. }) => 4,
            CliError::Write { .. } => 1,
            _ => 2,
        }
    }
}
