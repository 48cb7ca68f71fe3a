use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::parse::ParseError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{key}: {source}")]
    Setting {
        key: &'static str,
        #[source]
        source: ParseError,
    },

    #[error("config file {}: line {line}: {reason}", path.display())]
    ConfigFile {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Engine(#[from] qcarpet::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    /// 2 for bad inputs, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) if e.is_numerical() => 3,
            CliError::Io { .. } => 1,
            _ => 2,
        }
    }
}
