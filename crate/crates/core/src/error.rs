use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates its contract. `dataset` is empty when
    /// the error is not tied to a dataset entry.
    #[error("config error{}: field `{field}`: {message}", fmt_dataset(.dataset))]
    Config {
        dataset: String,
        field: String,
        message: String,
    },

    #[error("invalid header pattern {pattern:?}: {message}")]
    HeaderPattern { pattern: String, message: String },

    #[error("invalid mask rule `{name}`: {source}")]
    MaskRule {
        name: String,
        #[source]
        source: regex::Error,
    },

    /// A numeric kernel was called outside its domain, e.g. entropy of an
    /// empty token sequence.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data is inconsistent (e.g. parsed output and ground truth do not
    /// cover the same lines).
    #[error("input error: {0}")]
    Input(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("backend error: {message}")]
    Backend { message: String, retryable: bool },
}

fn fmt_dataset(d: &str) -> String {
    if d.is_empty() {
        String::new()
    } else {
        format!(" in dataset `{d}`")
    }
}

impl Error {
    pub(crate) fn config(dataset: &str, field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            dataset: dataset.to_string(),
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn is_retryable(&self) -> bool {
        matches!(self, Error::Backend { retryable: true, .. })
    }
}
