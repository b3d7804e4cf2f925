use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range for {len} features")]
    Index { index: usize, len: usize },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("model contract violated: {0}")]
    ModelContract(String),

    #[error("singular fit: {0}")]
    SingularFit(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{path}: {message}")]
    Ingest { path: PathBuf, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl Error {
    /// Errors raised by a model misbehaving, as opposed to bad user input.
    pub fn is_model_contract(&self) -> bool {
        matches!(self, Error::ModelContract(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
