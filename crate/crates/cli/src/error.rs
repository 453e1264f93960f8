use std::path::PathBuf;

use convex_trig_core::{Error as CoreError, Violation};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("invalid convex body:{}", list(.0))]
    InvalidBody(Vec<Violation>),
    #[error("this command needs a polygon body")]
    NotAPolygon,
    #[error("{0}\nhint: pass --policy stay, --policy dwell:<time> or --policy exit:<increasing|decreasing>")]
    Separatrix(CoreError),
    #[error("H must be positive, got {0}")]
    NonPositiveH(f64),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Write(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(CoreError),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| format!("\n  - {x}")).collect()
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Json { .. } => 2,
            CliError::InvalidBody(_) => 3,
            CliError::NotAPolygon => 4,
            CliError::Separatrix(_) => 5,
            CliError::NonPositiveH(_) => 6,
            _ => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidBody(v) => CliError::InvalidBody(v),
            CoreError::NotAPolygon => CliError::NotAPolygon,
            CoreError::PolicyRequired { .. } => CliError::Separatrix(e),
            e => CliError::Core(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
