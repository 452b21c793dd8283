use thiserror::Error;

/// Everything that can go wrong while building, evaluating or checking
/// values of the finite universe.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cardinality of {what} exceeds cap {cap}")]
    CardinalityExceeded { what: String, cap: u64 },

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("invalid type descriptor: {0}")]
    InvalidType(String),

    #[error("recursion reached sequence length {length}, past depth guard {guard}")]
    DepthExceeded { guard: usize, length: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },

    #[error("invariant violated at {location}: {message}")]
    Invariant { location: String, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::TypeMismatch(msg.into())
    }

    pub(crate) fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invariant(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invariant {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
