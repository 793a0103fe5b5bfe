use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] wavegen_core::Error),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 configuration, 3 numerical failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        use wavegen_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Core(e) => match e {
                E::Config(_) | E::Parameter(_) | E::Shape { .. } | E::OutOfRange { .. } => 2,
                E::Depth { .. } | E::Cfl(_) | E::Integration(_) | E::Divergence { .. } => 3,
                E::Io { .. } | E::Parse { .. } => 4,
            },
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
