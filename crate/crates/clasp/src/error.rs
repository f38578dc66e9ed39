use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular, cokernel is infinite")]
    Singular,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("gcd({p}, {q}) = {gcd}, expected 1")]
    NotCoprime { p: i64, q: i64, gcd: i64 },

    #[error("expected an odd order, got {0}")]
    EvenOrder(String),

    #[error("profile is not conjugation symmetric at {0}")]
    Asymmetric(String),

    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: String, found: String },

    #[error("group of order {0} is too large to enumerate")]
    TooLarge(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
