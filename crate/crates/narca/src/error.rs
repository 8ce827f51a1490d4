use std::io;
use std::path::PathBuf;

use narca_core::ca::CaError;
use narca_core::cluster::ClusterError;
use narca_core::impact::ImpactError;
use narca_core::segment::SegmentError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{message}")]
    Config { message: String, path: Option<PathBuf> },
    #[error("{path}: {message}")]
    Data { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Analysis(#[from] narca_core::Error),
}

/// Process exit status for each error class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Config,
    Data,
    Numeric,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 2,
            ErrorKind::Data => 3,
            ErrorKind::Numeric => 4,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub kind: ErrorKind,
    pub exit_code: i32,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config {
            message: message.into(),
            path: None,
        }
    }

    pub fn data(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Data {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        use narca_core::Error as E;
        match self {
            CliError::Config { .. } => ErrorKind::Config,
            CliError::Io { source, .. } if source.kind() == io::ErrorKind::NotFound => ErrorKind::Config,
            CliError::Io { .. } | CliError::Data { .. } => ErrorKind::Data,
            CliError::Analysis(e) => match e {
                E::Ca(CaError::Convergence(_))
                | E::Cluster(ClusterError::NonFinite(_))
                | E::Impact(ImpactError::DegenerateSpread)
                | E::Impact(ImpactError::Ca(CaError::Convergence(_)))
                | E::Segment(SegmentError::Ca(CaError::Convergence(_))) => ErrorKind::Numeric,
                _ => ErrorKind::Data,
            },
        }
    }

    pub fn report(&self) -> ErrorReport {
        let kind = self.kind();
        let path = match self {
            CliError::Config { path, .. } => path.clone(),
            CliError::Data { path, .. } | CliError::Io { path, .. } => Some(path.clone()),
            CliError::Analysis(_) => None,
        };
        ErrorReport {
            kind,
            exit_code: kind.exit_code(),
            message: self.to_string(),
            path: path.map(|p| p.display().to_string()),
        }
    }
}
