use std::io;
use std::path::PathBuf;

/// Failure of a command, carrying the process exit code it maps to.
///
/// `2` covers usage and configuration problems, `3` bad data inside an
/// otherwise readable input, and `1` anything that went wrong writing output.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("cannot open {}: {source}", path.display())]
    Open { path: PathBuf, source: io::Error },
    #[error("row {row}: {message}")]
    Data { row: u64, message: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Config(tcct_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::MissingColumn(_)
            | CliError::Open { .. }
            | CliError::Config(_) => 2,
            CliError::Data { .. } | CliError::Input(_) => 3,
            CliError::Write { .. } => 1,
        }
    }

    pub(crate) fn data(row: u64, message: impl Into<String>) -> Self {
        CliError::Data {
            row,
            message: message.into(),
        }
    }

    pub(crate) fn write(path: impl Into<PathBuf>, source: impl Into<io::Error>) -> Self {
        CliError::Write {
            path: path.into(),
            source: source.into(),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

impl From<tcct_core::Error> for CliError {
    fn from(e: tcct_core::Error) -> Self {
        match e {
            tcct_core::Error::InvalidConfig(_) => CliError::Config(e),
            other => CliError::Input(other.to_string()),
        }
    }
}
