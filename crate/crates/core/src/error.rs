use thiserror::Error;

/// Errors produced by the counting library.
///
/// `InvalidArgument` and `TooLarge` are caller mistakes; the integrality
/// variants mean an exact division or an exact sum did not come out whole,
/// which can only happen through an implementation bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("inexact division in {context}: remainder of dividing by {divisor} is nonzero")]
    InexactDivision { context: String, divisor: String },

    #[error("non-integral sum in {context}: got {value}")]
    NonIntegral { context: String, value: String },

    #[error("negative count in {context}: got {value}")]
    NegativeCount { context: String, value: String },
}

impl Error {
    /// True for the integrality sentinels (exact division or integral sum failed).
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InexactDivision { .. } | Error::NonIntegral { .. } | Error::NegativeCount { .. }
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
