//! Error type shared across the pipeline.

use std::path::Path;

/// Errors produced by ingestion, validation, and numerical routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A row or field could not be parsed; carries the source location.
    #[error("{path}:{line}: parse error: {msg}")]
    Parse { path: String, line: u64, msg: String },

    /// Structurally invalid input (duplicate keys, inconsistent tables).
    #[error("ingestion error: {0}")]
    Ingestion(String),

    /// Input violates a documented precondition.
    #[error("validation error: {0}")]
    Validation(String),

    /// A numerical routine cannot produce a result (singular design,
    /// zero variance, out-of-domain parameter).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn parse(path: &Path, line: u64, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.display().to_string(), line, msg: msg.into() }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io { path: path.display().to_string(), source }
    }

    /// Process exit code for this error class: 2 for validation-type
    /// failures, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
