use std::path::PathBuf;

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const USAGE: i32 = 64;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error(transparent)]
    Numerical(#[from] ballnls_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use ballnls_core::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Validation(_) | CliError::Io { .. } | CliError::Json { .. } => {
                exit::VALIDATION
            }
            CliError::Numerical(e) => match e {
                E::Resolution { .. } | E::Accuracy(_) | E::Search(_) | E::MassDrift { .. } => {
                    exit::NUMERICAL
                }
                E::Domain(_) | E::Fitting(_) | E::Dependency(_) => exit::VALIDATION,
            },
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::CliError::Validation(format!($($arg)*))
    };
}
pub(crate) use invalid;
