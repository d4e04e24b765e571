use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The kinetic coefficient of a Sturm-Liouville problem vanished or
    /// became negative.
    #[error("singular coefficient: p({x}) = {value}")]
    SingularCoefficient { x: f64, value: f64 },

    /// A mass profile produced a non-positive inverse mass.
    #[error("invalid mass profile: 1/m({x}) = {value}")]
    InvalidProfile { x: f64, value: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::NumericalFailure(msg.into())
    }

    /// True for errors caused by the caller's input rather than by a
    /// numerical breakdown.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::InvalidProfile { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
