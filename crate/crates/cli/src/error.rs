use std::io;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_MISSING_INPUT: i32 = 2;
pub const EXIT_CONFIG: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Runtime(String),

    #[error(transparent)]
    Core(#[from] cbosel_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::MissingInput(_) => EXIT_MISSING_INPUT,
            Self::Config(_) => EXIT_CONFIG,
            Self::Runtime(_) => EXIT_RUNTIME,
            Self::Core(cbosel_core::Error::Config(_)) => EXIT_CONFIG,
            Self::Core(cbosel_core::Error::Io { source, .. }) if source.kind() == io::ErrorKind::NotFound => {
                EXIT_MISSING_INPUT
            }
            Self::Core(_) => EXIT_RUNTIME,
        }
    }

    pub(crate) fn write(path: &std::path::Path, e: io::Error) -> Self {
        Self::Runtime(format!("cannot write {}: {e}", path.display()))
    }
}
