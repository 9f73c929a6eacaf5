use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by loading, training and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("line {line}: cannot parse {token:?} as a real value")]
    Parse { line: usize, token: String },

    #[error("line {line}: non-finite value {value}")]
    Value { line: usize, value: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("size mismatch: expected {expected}, found {found}")]
    Size { expected: usize, found: usize },

    #[error("series too short: length {0}, need at least 2")]
    TooShort(usize),

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("incompatible data: {0}")]
    Schema(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("inconsistent input: {0}")]
    Consistency(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid model file: {0}")]
    Model(#[from] serde_json::Error),

    #[error("report file: {0}")]
    Report(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Short machine-greppable category used by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Format { .. } | Error::Parse { .. } | Error::Value { .. } => "data-format",
            Error::EmptyInput => "empty-input",
            Error::Size { .. } | Error::TooShort(_) | Error::NonFinite(_) => "size",
            Error::Parameter(_) => "parameter",
            Error::InsufficientData(_) => "insufficient-data",
            Error::Schema(_) => "schema",
            Error::Domain(_) => "domain",
            Error::Consistency(_) => "consistency",
            Error::Training(_) => "training",
            Error::Io { .. } => "io",
            Error::Model(_) => "model",
            Error::Report(_) => "report",
        }
    }

    /// Process exit status: 2 for bad parameters, 4 for file access and
    /// report files, 3 for everything wrong with the data or model.
    pub fn exit_status(&self) -> i32 {
        match self {
            Error::Parameter(_) => 2,
            Error::Io { .. } | Error::Report(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
