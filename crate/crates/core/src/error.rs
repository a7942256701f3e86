use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A physical or numerical parameter lies outside its admissible domain.
    #[error("parameter `{name}` out of domain: {reason}")]
    ParameterDomain { name: &'static str, reason: String },

    /// A symbol string or symbol value could not be interpreted as OOK.
    #[error("invalid symbol sequence: {0}")]
    InvalidSymbols(String),

    /// A sweep point failed; the axis value identifies which one.
    #[error("sweep point {axis}={value} failed: {source}")]
    SweepPoint {
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::ParameterDomain {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
