//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A vertex index is outside `0..vertex_count`.
    #[error("vertex {vertex} out of range for graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    /// The same ordered pair was supplied twice.
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    /// A structural invariant of an input does not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// An argument is outside the operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An exhaustive search needed more work than its budget allows.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    /// A result failed its own verification; indicates a bug.
    #[error("internal check failed: {0}")]
    Internal(String),
    /// A matrix is singular where an inverse was requested.
    #[error("matrix is singular")]
    Singular,
    /// Text input did not match its format.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::BudgetExceeded(msg.into())
    }
}
