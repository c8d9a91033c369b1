use thiserror::Error;

/// Errors raised by the library. Verification failures name the violated check.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("polynomial vanishes modulo {0}")]
    ZeroModP(u64),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("field verification failed [{check}]: {detail}")]
    Verification { check: String, detail: String },
    #[error("index divisor: {0} divides [O_K : Z[theta]] and no verified factorization was supplied")]
    IndexDivisor(u64),
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn verification(check: &str, detail: impl Into<String>) -> Self {
        Error::Verification {
            check: check.to_string(),
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors that signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
