//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by constructors, algorithms, and I/O.
#[derive(Debug, Error)]
pub enum SppError {
    /// A caller-supplied argument violated a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Data failed a structural invariant (e.g. a rank row that is not a
    /// permutation, a self-loop in a constraint set).
    #[error("validation failed: {0}")]
    Validation(String),

    /// A file could not be parsed; `detail` names the offending field.
    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    /// An enumeration request exceeded the configured cap.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// An experiment configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// An underlying I/O failure, tagged with the path involved.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl SppError {
    /// Convenience constructor used by the file helpers.
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        SppError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, SppError>;
