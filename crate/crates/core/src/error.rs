use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("input domain mismatch: {0}")]
    Domain(String),

    #[error("insufficient data: need at least {needed} patterns, found {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("modularity undefined: total complement edge weight is zero")]
    UndefinedModularity,

    #[error("AUC undefined: scores must contain both target and non-target patterns")]
    UndefinedAuc,

    #[error("modularity {0} outside [-1/2, 1]")]
    ModularityDomain(f64),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: column `{column}` holds non-numeric value `{value}`")]
    NonNumeric {
        path: PathBuf,
        line: usize,
        column: String,
        value: String,
    },

    #[error("training failed: {0}")]
    TrainingFailed(String),

    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
