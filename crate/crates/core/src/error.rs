use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input contained NaN or infinite values.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// A parameter or shape lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Matrix expected to be positive semi-definite has a clearly negative eigenvalue.
    #[error("matrix is not positive semi-definite (eigenvalue {eigenvalue:e}, largest {largest:e})")]
    NotPsd { eigenvalue: f64, largest: f64 },

    /// Matrix expected to be symmetric is not.
    #[error("matrix is not symmetric (entry ({row}, {col}) differs by {diff:e})")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    /// Data has no variance to explain.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// A training set lacks one of the two classes.
    #[error("degenerate labels: class {missing} has no objects")]
    DegenerateLabels { missing: u8 },

    /// Requested approximation is undefined at this point (2N == p).
    #[error("approximation undefined: {0}")]
    Regime(String),

    /// Failure while reading a dataset.
    #[error("cannot ingest {path}: {reason}")]
    Ingest { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
