use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("file not found: {0}")]
    MissingFile(PathBuf),

    #[error("empty file: {0}")]
    EmptyFile(PathBuf),

    #[error("malformed header in {path}: {detail}")]
    MalformedHeader { path: PathBuf, detail: String },

    #[error("{path}:{line}: {detail}")]
    Row {
        path: PathBuf,
        line: u64,
        detail: String,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("data error: {0}")]
    Data(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dataset contains a single class; a binary classifier needs both labels")]
    SingleClass,

    #[error("class {label} has {count} labeled members, fewer than k = {k}")]
    TooFewPerClass { label: u8, count: usize, k: usize },

    #[error("tweet {id} has no sentiment label")]
    Unlabeled { id: String },

    #[error("vocabulary is empty after min_df filtering")]
    EmptyVocabulary,

    #[error("term not in vocabulary: {0:?}")]
    UnknownTerm(String),

    #[error(
        "naive Bayes requires non-negative features, found {value} at index {index}; \
         use the smooth idf variant or raw term frequencies"
    )]
    NegativeFeature { index: usize, value: f64 },

    #[error("{family} training diverged at epoch {epoch} (non-finite loss or weights)")]
    Diverged { family: &'static str, epoch: usize },

    #[error("feature index {index} out of range for dimension {dim}")]
    DimensionMismatch { index: usize, dim: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("ROC/AUC undefined: truth contains a single class")]
    UndefinedAuc,

    #[error("model was trained against vocabulary {expected}, got {found}")]
    FingerprintMismatch { expected: String, found: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 usage/config, 2 data, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            // Negative features reach naive Bayes only through an idf setting
            // it cannot use, so they count as a configuration error.
            Error::Config(_) | Error::InvalidParameter(_) | Error::Json(_) | Error::NegativeFeature { .. } => 1,
            Error::Diverged { .. } => 3,
            _ => 2,
        }
    }
}
