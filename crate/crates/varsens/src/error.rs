use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] varsens_core::Error),
    #[error("external model: {0}")]
    External(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("replay differs from the recorded run: {0}")]
    ReplayMismatch(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Process exit status: 2 for bad input, 3 for numerical degeneracy,
    /// 4 for external-model failures, 1 for a replay that does not match.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::External(_) => 4,
            CliError::ReplayMismatch(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
