use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure category, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Validation,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("row {row}, column {column} ({code}): expected 0 or 1, found {value:?}")]
    NonBinary {
        row: usize,
        column: usize,
        code: String,
        value: String,
    },
    #[error("row {row}: expected {expected} fields, found {found}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate item code {0:?}")]
    DuplicateItem(String),
    #[error("unknown item code {0:?}")]
    UnknownItem(String),
    #[error("item {0:?} is assigned more than once")]
    DuplicateAssignment(String),
    #[error("item {0:?} has no group assignment")]
    MissingAssignment(String),
    #[error("group {0} has no items")]
    EmptyGroup(usize),
    #[error("invalid group index {value:?} for item {code:?}")]
    BadGroup { code: String, value: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical failure at iteration {iteration}: {message}")]
    NonFinite { iteration: usize, message: String },
    #[error("every start failed; last diagnostic: {0}")]
    AllStartsFailed(String),
    #[error("optimizer failure: {0}")]
    Optimizer(String),
    #[error("dimension clustering stopped after {} merges: {source}", partial.steps.len())]
    Clustering {
        #[source]
        source: Box<Error>,
        partial: Box<crate::dimensionality::DendrogramPath>,
    },
    #[error("k = {k}: {source}")]
    AtClassCount {
        k: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_) => ErrorKind::Usage,
            Error::NonFinite { .. } | Error::AllStartsFailed(_) | Error::Optimizer(_) => {
                ErrorKind::Numerical
            }
            Error::AtClassCount { source, .. } | Error::Clustering { source, .. } => source.kind(),
            _ => ErrorKind::Validation,
        }
    }
}
