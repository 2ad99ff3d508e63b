use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of an operation (NaN, out of bounds).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition was not met (empty input and the like).
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("problem `{0}` is already registered")]
    Conflict(String),

    /// Evaluations or trace rows arrived out of order.
    #[error("sequencing error: {0}")]
    Sequencing(String),

    #[error("aggregation error: {0}")]
    Aggregation(String),

    #[error("comparison error: {0}")]
    Comparison(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed file {path}: {reason}")]
    Format { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn format(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag for the error category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::Config(_) => "config",
            Error::UnknownProblem(_) => "lookup",
            Error::Conflict(_) => "conflict",
            Error::Sequencing(_) => "sequencing",
            Error::Aggregation(_) => "aggregation",
            Error::Comparison(_) => "comparison",
            Error::Unsupported(_) => "unsupported",
            Error::Format { .. } => "format",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
        }
    }
}
