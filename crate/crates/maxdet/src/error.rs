use thiserror::Error;

/// Crate-wide error type.
///
/// The split is deliberately coarse: callers mostly want to distinguish
/// "your input made no sense" ([`Error::Usage`], [`Error::Parse`]) from
/// "the input was fine but this operation does not apply to it"
/// ([`Error::Unsupported`], [`Error::Domain`]).
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual or structural input (matrix files, JSON, ...).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Arguments that violate an operation's contract (wrong sizes,
    /// mismatched root orders, out-of-range exponents, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// Structurally valid input outside an operation's mathematical domain
    /// (e.g. a matrix that is not Hermitian where a Gram matrix is required,
    /// or `q` not a prime power).
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is meaningful but not implemented for these parameters
    /// (e.g. exact arithmetic requested for a root order outside {2,3,4,6},
    /// or sizes beyond the supported range).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An internal invariant failed. Seeing this is a bug in the crate.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
