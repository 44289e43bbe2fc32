use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {reason}: {text:?}")]
    Parse { line: usize, text: String, reason: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("rating {rating} outside declared scale [{min}, {max}]")]
    OutOfScale { rating: f64, min: f64, max: f64 },
    #[error("{kind} index {index} out of range (len {len})")]
    IndexOutOfRange { kind: &'static str, index: usize, len: usize },
    #[error("margin {0} is not positive; log-margin loss is undefined")]
    NonPositiveMargin(f64),
    #[error("training diverged at epoch {epoch} (non-finite factors); try a smaller learning rate")]
    Diverged { epoch: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("shape mismatch: model has {model_users} users and {model_items} items, data has {data_users} users and {data_items} items")]
    ShapeMismatch { model_users: usize, model_items: usize, data_users: usize, data_items: usize },
    #[error("malformed model artifact: {0}")]
    Artifact(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse error class, mapped onto process exit codes by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Divergence,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Usage => 1,
            ErrorClass::Data => 2,
            ErrorClass::Divergence => 3,
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) => ErrorClass::Usage,
            Error::Diverged { .. } => ErrorClass::Divergence,
            _ => ErrorClass::Data,
        }
    }
}
