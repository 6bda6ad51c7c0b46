use thiserror::Error;

/// Errors raised by the numerical library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// A point where the quantity is genuinely singular (e.g. a kernel on the diagonal).
    #[error("singular input: {0}")]
    SingularInput(String),

    /// An iterative or adaptive procedure failed to reach its tolerance.
    #[error("numerical non-convergence: {what} (estimate {estimate:e}, error {error:e})")]
    NonConvergence {
        what: String,
        estimate: f64,
        error: f64,
    },

    /// A quantity that should be finite grows without bound.
    #[error("divergent: {0}")]
    Divergent(String),

    /// The caller asked for something the API does not define.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed input data (CSV, config, grid specs).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// True for failures caused by numerics rather than by the caller.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Divergent(_))
    }
}
