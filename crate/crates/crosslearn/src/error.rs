use std::path::{Path, PathBuf};

/// Failures of the command-line driver, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] crosslearn_core::Error),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.to_path_buf(), message: err.to_string() }
    }

    /// 2 for configuration problems, 3 for numerical failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(e) => match e.root() {
                crosslearn_core::Error::InvalidArgument(_) | crosslearn_core::Error::DimensionMismatch { .. } => 2,
                _ => 3,
            },
            CliError::Io { .. } => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
