//! Error type shared by every module.

use std::fmt;

/// Errors surfaced by the toolkit.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside a function's domain (pole, ordering violation,
    /// degenerate geometry, ...).
    Domain(String),
    /// An iterative method did not converge within its budget.
    Convergence {
        what: &'static str,
        iterations: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Convergence { what, iterations } => {
                write!(f, "{what} did not converge after {iterations} iterations")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
