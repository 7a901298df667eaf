use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} at {context} is not a probability in [0, 1]")]
    NotAProbability { context: String, value: f64 },

    #[error("row {context} sums to {sum}, expected 1")]
    NotSimplex { context: String, sum: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("arm {0} observed more than once in a single round")]
    DuplicateArm(usize),

    #[error("arm index {index} out of range (m = {arms})")]
    ArmOutOfRange { index: usize, arms: usize },

    #[error("round {round}: oracle proposed an infeasible action: {action}")]
    InfeasibleAction { round: u64, action: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("instance too large for exhaustive search: {sources} sources (limit {limit})")]
    InstanceTooLarge { sources: usize, limit: usize },

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("oracle `{oracle}` cannot drive environment `{env}`")]
    IncompatibleOracle { env: String, oracle: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
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
