use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the solver, reflector construction and file handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsolvable problem: {0}")]
    Unsolvable(String),

    #[error(
        "mass balance violated: source mass {source_mass:e}, target mass {target_mass:e} \
         (relative mismatch {mismatch:e} exceeds tolerance {tolerance:e})"
    )]
    BalanceViolation {
        source_mass: f64,
        target_mass: f64,
        mismatch: f64,
        tolerance: f64,
    },

    #[error("problem too large: {sources} x {targets} points exceeds cap {cap}; use the entropic method")]
    ProblemTooLarge {
        sources: usize,
        targets: usize,
        cap: usize,
    },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
