use std::path::PathBuf;

use thiserror::Error;

/// Failures of a scenario run, split by exit code.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// Unreadable or schema-violating input (exit 2).
    #[error("input error: {0}")]
    Input(String),
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// A certification or construction stage failed (exit 1).
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: lipext_core::Error,
    },
    /// A check that reports violations rather than erroring (exit 1).
    #[error("stage `{stage}` failed: {detail}")]
    Check { stage: &'static str, detail: String },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Input(_) | HarnessError::Io { .. } => 2,
            HarnessError::Stage { .. } | HarnessError::Check { .. } => 1,
        }
    }

    pub fn stage(&self) -> Option<&'static str> {
        match self {
            HarnessError::Stage { stage, .. } | HarnessError::Check { stage, .. } => Some(stage),
            _ => None,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> HarnessError {
        let path = path.into();
        move |source| HarnessError::Io { path, source }
    }

    pub(crate) fn at(stage: &'static str) -> impl FnOnce(lipext_core::Error) -> HarnessError {
        move |source| HarnessError::Stage { stage, source }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
