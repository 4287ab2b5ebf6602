//! Crate-wide error type.

use std::path::PathBuf;

/// Errors surfaced by the counting pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violates its documented precondition (e.g. `sigma <= 0`).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input value or combination of inputs is rejected (e.g. out-of-bounds
    /// annotation point, mismatched shapes).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration file or override could not be applied.
    #[error("invalid config: {0}")]
    Config(String),

    /// A referenced artifact (dataset, checkpoint, run directory) is missing.
    #[error("missing artifact: {0}")]
    MissingArtifact(String),

    /// Training or evaluation produced a non-finite value.
    #[error("numeric failure: {0}")]
    NumericFailure(String),

    /// An I/O operation failed; the path gives context.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A file exists but its contents could not be parsed.
    #[error("parse error in {file}: {message}")]
    Parse { file: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(file: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
