use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("invalid JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("missing artifact {0}")]
    MissingArtifact(PathBuf),
    #[error("malformed artifact {path}: {reason}")]
    BadArtifact { path: PathBuf, reason: String },
    #[error(transparent)]
    Core(#[from] rfest_core::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for unusable input (parse errors, missing artifacts), 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Read { .. } | Self::Json { .. } | Self::Config(_) | Self::MissingArtifact(_) | Self::BadArtifact { .. } => 2,
            Self::Write { .. } | Self::Core(_) | Self::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
