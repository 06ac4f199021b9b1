use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Library(#[from] polytriv::Error),
}

impl CliError {
    /// 2 for bad input, 3 for budget or capability limits.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(e) if e.is_resource_limit() => 3,
            _ => 2,
        }
    }
}
