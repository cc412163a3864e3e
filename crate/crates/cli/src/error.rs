use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("solver error: {0}")]
    Solver(drroots::Error),
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Solver(_) => 4,
            CliError::Io { .. } => 5,
        }
    }
}

impl From<drroots::Error> for CliError {
    fn from(e: drroots::Error) -> Self {
        use drroots::Error as E;
        match e {
            E::Io { path, source } => CliError::Io { path, source },
            E::Csv(err) => CliError::Io {
                path: PathBuf::from("csv output"),
                source: std::io::Error::other(err),
            },
            E::InvalidConfig(msg) => CliError::Usage(msg),
            E::Schema(msg) => CliError::Parse(msg),
            other => CliError::Solver(other),
        }
    }
}
