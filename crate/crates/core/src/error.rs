use thiserror::Error;

/// Errors raised by every analysis routine in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller-supplied argument violates a documented precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// Two vertices live in different connected components, so the graph
    /// metric between them is infinite.
    #[error("infinite distance: {0}")]
    MetricInfinite(String),
    /// A size guard was exceeded (dense eigensolve, ball census, ...).
    #[error("capability limit exceeded: {0}")]
    Capability(String),
    /// A randomized generator ran out of retries.
    #[error("generation failed: {0}")]
    Generation(String),
    /// An internal consistency check failed. This is a bug, never an input problem.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! input_err {
    ($($arg:tt)*) => { $crate::error::Error::Input(format!($($arg)*)) };
}
pub(crate) use input_err;
