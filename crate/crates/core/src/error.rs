use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    /// An argument lies outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Constants of a region or density estimate violate their constraints.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{path}:{line}: cannot parse {text:?}")]
    Parse {
        path: PathBuf,
        line: usize,
        text: String,
    },

    #[error("{path}:{line}: ordinates not strictly ascending")]
    NotAscending { path: PathBuf, line: usize },

    /// A zero table does not reach the requested height.
    #[error("coverage error: requested height {requested:e} exceeds table height {available:e}")]
    Coverage { requested: f64, available: f64 },

    /// Growth conditions on ω(x) required by the main bound fail.
    #[error("condition error: {0}")]
    Condition(String),

    #[error("no interior minimum: {0}")]
    NoMinimum(String),

    #[error("limit error: {0}")]
    Limit(String),

    #[error("missing checkpoint {0}")]
    MissingCheckpoint(u64),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        LabError::Domain(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        LabError::Parameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Io { .. } => 2,
            _ => 1,
        }
    }
}
