use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("invalid config at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error("unknown experiment `{0}` (see `list-experiments`)")]
    UnknownExperiment(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Numerical(#[from] pathcons::Error),

    #[error("{0}")]
    Runtime(String),
}

impl LabError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        LabError::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    /// 1 for bad input, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Validation { .. } | LabError::UnknownExperiment(_) => 1,
            _ => 2,
        }
    }
}
