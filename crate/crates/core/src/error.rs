use std::path::PathBuf;

use thiserror::Error;

use crate::graph::Violation;
use crate::time::TimeInstant;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("instant {instant} is outside the horizon of {horizon} instants")]
    OutOfHorizon {
        instant: TimeInstant,
        horizon: usize,
    },

    #[error("invalid temporal element: {0}")]
    InvalidElement(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{file}:{line}:{column}: {message}")]
    Parse {
        file: PathBuf,
        line: u64,
        column: usize,
        message: String,
    },

    #[error("unknown time label {label:?} in {file}")]
    UnknownTimeLabel { file: PathBuf, label: String },

    #[error("invalid manifest: {0}")]
    Manifest(String),

    #[error("graph failed validation with {} violation(s)", .0.len())]
    Integrity(Vec<Violation>),

    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
