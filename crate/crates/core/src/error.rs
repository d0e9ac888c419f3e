use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input data violates a structural requirement (length, finiteness, range).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A filter or optimizer parameter is out of its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The statistic is undefined for this input (zero variance, zero energy).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Inconsistent or unsatisfiable configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Every candidate in the initial population scored a non-finite fitness.
    #[error("optimizer initialization failed: {0}")]
    Initialization(String),

    /// A file could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn invalid_parameter(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// True for errors caused by the data rather than by the configuration.
    /// An optimizer that cannot score any initial candidate is blamed on the
    /// data, since the bounds have been validated by then.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Degenerate(_)
                | Error::Parse(_)
                | Error::Io(_)
                | Error::Initialization(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
