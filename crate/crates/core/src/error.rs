use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    /// A precondition on the arguments was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// An index or parameter fell outside the range a table or method supports.
    #[error("range error: {0}")]
    Range(String),

    /// A numerical method could not certify the requested accuracy.
    #[error("accuracy error: {message} (best estimate {estimate}, error estimate {error_estimate:e})")]
    Accuracy {
        message: String,
        estimate: Complex64,
        error_estimate: f64,
    },

    /// A configured work budget would be exceeded.
    #[error("resource error: {0}")]
    Resource(String),

    #[error("cache format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl LabError {
    pub fn domain(msg: impl Into<String>) -> Self {
        LabError::Domain(msg.into())
    }

    pub fn range(msg: impl Into<String>) -> Self {
        LabError::Range(msg.into())
    }

    pub fn accuracy(msg: impl Into<String>, estimate: Complex64, error_estimate: f64) -> Self {
        LabError::Accuracy {
            message: msg.into(),
            estimate,
            error_estimate,
        }
    }

    /// Process exit status used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Domain(_) | LabError::Range(_) | LabError::Format(_) | LabError::Io(_) => 2,
            LabError::Accuracy { .. } | LabError::Resource(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
