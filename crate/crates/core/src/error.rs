use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("non-positive water depth {depth:e} at {location}")]
    Depth { depth: f64, location: String },

    #[error("CFL violation: {0}")]
    Cfl(String),

    #[error("shape mismatch: expected length {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("time {t} outside recorded range [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("integration error: {0}")]
    Integration(String),

    #[error("solution diverged at step {step} (t = {t})")]
    Divergence { step: usize, t: f64 },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {} line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
}

impl Error {
    pub(crate) fn depth(depth: f64, location: impl Into<String>) -> Self {
        Error::Depth {
            depth,
            location: location.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
