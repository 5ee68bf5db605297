use std::io;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::sitb::FormatError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: {source}", path.display())]
    Format {
        path: PathBuf,
        #[source]
        source: FormatError,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{}: {source}", path.display())]
    Data {
        path: PathBuf,
        #[source]
        source: site_core::Error,
    },
    #[error(transparent)]
    Core(#[from] site_core::Error),
    #[error("{0}")]
    Config(String),
    #[error("validation failed with {} issue(s)", .0.len())]
    Invalid(Vec<Issue>),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Self::Io { source, .. } if source.kind() == io::ErrorKind::NotFound => "missing_file",
            Self::Io { .. } => "io",
            Self::Format { source, .. } => source.code(),
            Self::Json { .. } => "invalid_json",
            Self::Csv { .. } => "invalid_csv",
            Self::Data { source, .. } | Self::Core(source) => source.code(),
            Self::Config(_) => "config",
            Self::Invalid(_) => "invalid",
        }
    }

    /// Flattens into machine-readable issues.
    pub fn issues(&self) -> Vec<Issue> {
        match self {
            Self::Invalid(list) => list.clone(),
            other => vec![Issue::from(other)],
        }
    }
}

/// One validation finding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub code: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub message: String,
}

impl Issue {
    pub fn new(code: &str, path: Option<String>, message: impl Into<String>) -> Self {
        Self {
            code: code.to_string(),
            path,
            message: message.into(),
        }
    }
}

impl From<&Error> for Issue {
    fn from(e: &Error) -> Self {
        let path = match e {
            Error::Io { path, .. }
            | Error::Format { path, .. }
            | Error::Json { path, .. }
            | Error::Csv { path, .. }
            | Error::Data { path, .. } => Some(path.display().to_string()),
            _ => None,
        };
        let message = match e {
            Error::Io { source, .. } => source.to_string(),
            Error::Format { source, .. } => source.to_string(),
            Error::Json { source, .. } => source.to_string(),
            Error::Csv { source, .. } => source.to_string(),
            Error::Data { source, .. } => source.to_string(),
            other => other.to_string(),
        };
        Issue::new(e.code(), path, message)
    }
}
