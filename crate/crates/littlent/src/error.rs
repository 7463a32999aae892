use std::path::PathBuf;

use littlent_core::circuit::ParseDiagnostic;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const PARSE_ERROR: i32 = 2;
    pub const RESOURCE_CAP: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {} parse error(s)", path.display(), diagnostics.len())]
    Parse {
        path: PathBuf,
        diagnostics: Vec<ParseDiagnostic>,
    },
    #[error("resource cap: {0}")]
    Cap(String),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verification(_) => exit::VERIFICATION_FAILED,
            Self::Cap(_) => exit::RESOURCE_CAP,
            Self::Parse { .. } | Self::Input(_) | Self::Io { .. } => exit::PARSE_ERROR,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<littlent_core::Error> for CliError {
    fn from(e: littlent_core::Error) -> Self {
        match e {
            littlent_core::Error::CapExceeded { .. } => Self::Cap(e.to_string()),
            other => Self::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
