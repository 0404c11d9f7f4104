use thiserror::Error;

use gdw_core::Error as CoreError;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_STRICT: i32 = 4;
pub const EXIT_AUDIT: i32 = 5;
pub const EXIT_INVALID_MODEL: i32 = 6;
pub const EXIT_BUDGET: i32 = 7;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{stage}: {source}")]
    Core {
        stage: &'static str,
        #[source]
        source: CoreError,
    },

    #[error("{stage}: cannot read {path}: {message}")]
    Io { stage: &'static str, path: String, message: String },

    #[error("{stage}: {message}")]
    Usage { stage: &'static str, message: String },
}

impl CliError {
    pub fn usage(stage: &'static str, message: impl Into<String>) -> Self {
        Self::Usage { stage, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Usage { .. } => EXIT_PARSE,
            Self::Core { source, .. } => match source {
                CoreError::Parse { .. } | CoreError::InvalidInput(_) | CoreError::Dimension(_) => EXIT_PARSE,
                CoreError::Solver(_) | CoreError::NoClassicalModels => EXIT_SOLVER,
                CoreError::Audit { .. } => EXIT_AUDIT,
                CoreError::InvalidModel { .. } => EXIT_INVALID_MODEL,
                CoreError::Budget { .. } | CoreError::EnumerationLimit(_) => EXIT_BUDGET,
            },
        }
    }
}

/// Attaches the pipeline stage to a core error.
pub trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, CliError>;
}

impl<T> Stage<T> for Result<T, CoreError> {
    fn stage(self, stage: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core { stage, source })
    }
}
