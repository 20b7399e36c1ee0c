use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch { expected: usize, got: usize },
    /// Two policies (or a policy and a Gram matrix) do not share a dictionary.
    DictionaryMismatch,
    /// The Gram matrix failed the positive semidefinite check.
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    /// The exact projection did not reach its tolerance within the sweep cap.
    NoConvergence { iterations: usize, residual: f64 },
    /// A weight or gradient became NaN or infinite.
    NonFinite { context: &'static str, iteration: usize },
    MissingCentralPolicy,
    InvalidArgument(String),
    /// A failure inside a training iteration.
    AtIteration { iteration: usize, source: Box<Error> },
}

impl Error {
    /// Innermost error, skipping iteration wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtIteration { source, .. } => source.root(),
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::DictionaryMismatch => write!(f, "policies do not share a dictionary"),
            Error::NotPositiveSemidefinite { min_eigenvalue } => {
                write!(f, "gram matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")
            }
            Error::NoConvergence { iterations, residual } => write!(
                f,
                "projection did not converge after {iterations} sweeps (residual {residual:e})"
            ),
            Error::NonFinite { context, iteration } => {
                write!(f, "non-finite value in {context} at iteration {iteration}")
            }
            Error::MissingCentralPolicy => write!(f, "bundle has no central policy"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::AtIteration { iteration, source } => write!(f, "iteration {iteration}: {source}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::AtIteration { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
