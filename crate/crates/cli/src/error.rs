use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Row { path: PathBuf, line: u64, message: String },
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: comove_core::Error,
    },
    #[error("{benchmark} vs {target}: degenerate pair, target is collinear with the benchmark in every window")]
    DegeneratePair { benchmark: String, target: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn core(context: impl Into<String>, source: comove_core::Error) -> Self {
        CliError::Core { context: context.into(), source }
    }

    /// 2 for bad input or usage, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        use comove_core::Error as E;
        match self {
            CliError::DegeneratePair { .. } => 3,
            CliError::Core {
                source:
                    E::DegenerateSeries
                    | E::DegenerateWindow
                    | E::SingularDesign
                    | E::NonStationary
                    | E::NotStandardized { .. },
                ..
            } => 3,
            _ => 2,
        }
    }
}
