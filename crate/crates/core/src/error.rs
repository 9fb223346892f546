use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gesture has fewer than 2 distinct-time points")]
    EmptyGesture,

    #[error("raw coordinate ({x}, {y}) lies outside the {width}x{height} screen")]
    OutOfScreen {
        x: f64,
        y: f64,
        width: u32,
        height: u32,
    },

    #[error("gesture start equals gesture end (zero-length swipe)")]
    DegenerateGesture,

    #[error("internal: zero time step between points {index} and {next}", next = .index + 1)]
    ZeroDt { index: usize },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid value: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema mismatch: expected `{expected}`, found `{found}`")]
    SchemaVersionMismatch { expected: String, found: String },

    #[error("prior draw rejected {attempts} times; priors cannot produce an on-screen swipe")]
    PriorRejectionExceeded { attempts: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("training diverged at epoch {epoch} (non-finite loss)")]
    Diverged { epoch: usize },

    #[error("training data contains a single class")]
    SingleClass,

    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: model expects {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("score set has no genuine or no impostor scores")]
    EmptyScores,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("model missing: {0}")]
    ModelMissing(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),

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
