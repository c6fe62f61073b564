use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("degenerate scene: {0}")]
    DegenerateScene(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("insufficient frames: need {required} ({what}), have {available}")]
    InsufficientFrames {
        what: &'static str,
        required: usize,
        available: usize,
    },

    #[error("no subject: {0}")]
    NoSubject(String),

    #[error("probe `{0}` has no ground-truth entry")]
    MissingTruth(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed CSIF input: {0}")]
    Csif(String),

    #[error("config error in {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
