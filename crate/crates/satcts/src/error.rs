use std::path::PathBuf;

use thiserror::Error;

use crate::dump::DumpError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid config: {message}")]
    Config { path: PathBuf, message: String },
    #[error("channel dump: {0}")]
    Dump(#[from] DumpError),
    #[error(transparent)]
    Model(#[from] satcts_core::Error),
    #[error("{path}: csv: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{0}")]
    Artifact(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>) -> impl FnOnce(csv::Error) -> Error {
        let path = path.into();
        move |source| Error::Csv { path, source }
    }

    /// Process exit code by category.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            Error::Io { .. } | Error::Csv { .. } => 3,
            Error::Dump(_) => 4,
            Error::Model(_) => 5,
            Error::Artifact(_) => 6,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            Error::Config { .. } => "config",
            Error::Io { .. } | Error::Csv { .. } => "io",
            Error::Dump(_) => "dump",
            Error::Model(_) => "model",
            Error::Artifact(_) => "artifact",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
