use thiserror::Error;

/// Errors raised by problem construction, parsing and the exact oracle.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input data violates a structural invariant. `pointer` is a JSON pointer
    /// into the offending document (or the problem layout it mirrors).
    #[error("invalid input at `{pointer}`: {message}")]
    InvalidInput { pointer: String, message: String },

    /// The document could not be deserialized against the problem schema.
    #[error("parse error at `{pointer}`: {message}")]
    Parse { pointer: String, message: String },

    /// Branch and bound visited more nodes than allowed.
    #[error("oracle budget exceeded after {nodes} nodes")]
    OracleBudgetExceeded { nodes: u64 },
}

impl Error {
    pub(crate) fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidInput {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
