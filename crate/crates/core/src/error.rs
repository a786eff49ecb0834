use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested accuracy would need more work than the configured cap allows.
    #[error("resource limit: {message} (best achievable bound {achievable:e})")]
    Resource { message: String, achievable: f64 },

    /// A numerical procedure did not reach its target accuracy.
    #[error("accuracy not reached: {message} (estimate {estimate:e}, error {error:e})")]
    Accuracy {
        message: String,
        estimate: f64,
        error: f64,
    },

    /// Two routes that must agree did not.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
