use std::process::ExitCode;

use linsync_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    /// The analysis ran and the answer is "no": not synchronizable, or
    /// outside the domain where σ² is finite.
    #[error("{0}")]
    Verdict(String),

    #[error("{path}: {source}")]
    Spec { path: String, source: serde_json::Error },

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 0 success, 1 not synchronizable, 2 usage or spec error, 3 numerical
    /// failure.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Verdict(_) => 1,
            CliError::Usage(_) | CliError::Spec { .. } | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                CoreError::NotSynchronizable { .. }
                | CoreError::OutsideValidity { .. }
                | CoreError::Divergent { .. } => 1,
                CoreError::InvalidParameter(_)
                | CoreError::Shape { .. }
                | CoreError::NonFinite { .. }
                | CoreError::Parse { .. }
                | CoreError::Io(_) => 2,
                CoreError::EigenNoConvergence { .. }
                | CoreError::NoZeroMode
                | CoreError::ComplexSpectrum(_)
                | CoreError::NotConverged { .. }
                | CoreError::Numerical(_) => 3,
            },
        }
    }

    pub fn is_usage(&self) -> bool {
        self.code() == 2
    }
}

pub type CliResult<T> = Result<T, CliError>;
