use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("SVD did not converge after {sweeps} sweeps")]
    SvdNoConvergence { sweeps: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },

    #[error("{what} index {index} out of range 0..{len}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gate on bond {bond} is not unitary (deviation {deviation:e})")]
    NonUnitaryGate { bond: usize, deviation: f64 },

    #[error("system of {n} sites exceeds the dense limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),

    #[error("parse error in {source_name}: {message}")]
    Parse {
        source_name: String,
        message: String,
    },

    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Short machine-readable tag for this error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::SvdNoConvergence { .. } => "svd_no_convergence",
            Error::EigenNoConvergence { .. } => "eigen_no_convergence",
            Error::OutOfRange { .. } => "out_of_range",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NonUnitaryGate { .. } => "non_unitary_gate",
            Error::TooLarge { .. } => "too_large",
            Error::Checkpoint(_) => "checkpoint",
            Error::Parse { .. } => "parse",
            Error::File { .. } => "file",
            Error::Io(_) => "io",
        }
    }
}
