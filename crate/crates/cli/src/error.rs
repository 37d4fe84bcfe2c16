use std::path::PathBuf;

use qwalk::graph::GraphLoadError;
use qwalk::WalkError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Walk(#[from] WalkError),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for a broken invariant, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Walk(e) if e.is_invariant_violation() => 2,
            _ => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn graph_load(path: impl Into<PathBuf>, err: GraphLoadError) -> Self {
        match err {
            // a file that parses but breaks a graph invariant is a walk error
            GraphLoadError::Graph(e) => CliError::Walk(e),
            GraphLoadError::Json(e) => CliError::Parse {
                path: path.into(),
                message: e.to_string(),
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
