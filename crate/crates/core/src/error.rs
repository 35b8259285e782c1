use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The caller supplied parameters that violate an operation's preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A text spec failed to parse.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Exhaustive work would exceed the configured budget.
    #[error("too large: {what}")]
    TooLarge {
        what: String,
        /// Best-known bounds on the requested quantity, when there are any.
        lower: Option<u64>,
        upper: Option<u64>,
    },

    /// A comparison could not be decided at the available precision or budget.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn too_large(what: impl Into<String>) -> Self {
        Error::TooLarge {
            what: what.into(),
            lower: None,
            upper: None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
