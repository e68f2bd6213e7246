use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors are split by who is at fault: the caller's input, a resource limit,
/// or an internal identity that failed to hold.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The input violates a documented precondition.
    InvalidInput(String),
    /// A table or transform would exceed its memory budget.
    Resource(String),
    /// A numerical or algebraic consistency check failed.
    Inconsistent(String),
    /// An iterative numerical method did not converge.
    NoConvergence(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::Resource(m) => write!(f, "resource budget exceeded: {m}"),
            Error::Inconsistent(m) => write!(f, "internal consistency failure: {m}"),
            Error::NoConvergence(m) => write!(f, "no convergence: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
