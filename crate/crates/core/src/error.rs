use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Array size is not a positive perfect square.
    #[error("invalid dimension: {what} = {value} (must be a positive perfect square)")]
    InvalidDimension { what: &'static str, value: usize },

    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("transmit power must be positive, got {0}")]
    NonPositivePower(f64),

    #[error("effective channel h2^H Theta H1 has zero norm")]
    DegenerateChannel,

    /// A closed form was evaluated outside the region where it is defined.
    #[error("numeric domain error: {0}")]
    Domain(String),

    #[error("{what} failed to converge (residual {residual:e})")]
    Convergence { what: &'static str, residual: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
