//! Error types shared across the toolchain.

use std::path::PathBuf;
use thiserror::Error;

/// Top-level error for all whiff operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad user input: missing files, malformed configuration, unusable CLI arguments.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The assembled model violates a structural invariant (e.g. duplicate qualified names).
    #[error("model error: {0}")]
    Model(String),

    /// A facts file failed schema validation; names the offending record and field.
    #[error("facts schema violation in record `{record}`, field `{field}`: {message}")]
    FactsSchema {
        record: String,
        field: String,
        message: String,
    },

    #[error("label error: {0}")]
    Labels(String),

    #[error("statistics error: {0}")]
    Stats(String),

    /// An internal invariant broke mid-pipeline. Maps to exit code 2.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Fatal input error (exit code 1).
    Input,
    /// Internal invariant violation (exit code 2).
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn internal_errors_map_to_internal_kind() {
        assert_eq!(Error::Internal("x".into()).kind(), ErrorKind::Internal);
        assert_eq!(Error::Config("x".into()).kind(), ErrorKind::Input);
        assert_eq!(Error::Model("x".into()).kind(), ErrorKind::Input);
    }
}
