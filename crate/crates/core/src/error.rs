use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("refining to level {level} needs {vertices} vertices, above the cap of {cap}")]
    RefinementTooLarge {
        level: u32,
        vertices: u128,
        cap: usize,
    },

    #[error("dimension fit needs at least 3 usable scales, got {usable}")]
    InsufficientScales { usable: usize },

    #[error("polyline bounding box has zero extent on both axes")]
    DegenerateBounds,

    #[error("report has no content to write")]
    EmptyReport,

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
