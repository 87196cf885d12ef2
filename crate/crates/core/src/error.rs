use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {message}")]
    ResourceLimit {
        message: String,
        /// Size that would have been needed (table limit, Hecke length, ...).
        required: Option<u64>,
    },

    #[error("numeric failure: {message} (residual {residual:e})")]
    NumericFailure {
        message: String,
        residual: f64,
        /// Best value available when the failure was detected.
        partial: Option<f64>,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("format error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Format { message: String, line: Option<usize> },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>, required: Option<u64>) -> Self {
        Error::ResourceLimit {
            message: msg.into(),
            required,
        }
    }

    pub(crate) fn numeric(msg: impl Into<String>, residual: f64) -> Self {
        Error::NumericFailure {
            message: msg.into(),
            residual,
            partial: None,
        }
    }

    pub(crate) fn format(msg: impl Into<String>, line: Option<usize>) -> Self {
        Error::Format {
            message: msg.into(),
            line,
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
