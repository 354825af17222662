use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable inputs, budget refusals.
    #[error("{0}")]
    Usage(String),

    /// A check or internal assertion failed.
    #[error("{0}")]
    Failure(String),

    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] gma_core::Error),
}

impl CliError {
    /// 0 success, 1 property failure, 2 usage error.
    pub fn exit_code(&self) -> u8 {
        use gma_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Output { .. } => 1,
            CliError::Core(e) => match e {
                E::UnknownNode(_)
                | E::UnknownInterface { .. }
                | E::MalformedPath { .. }
                | E::PathSyntax { .. }
                | E::InvalidAmount(_)
                | E::InvalidConfig { .. }
                | E::InvalidGraph(_)
                | E::Json(_) => 2,
                _ => 1,
            },
        }
    }
}
