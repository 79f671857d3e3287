use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request would exceed a size or work limit.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A computed result contradicts the concentration theorem. Never produced
    /// by a correct build.
    #[error("verification failed at h = {h}: {reason}")]
    Verification { h: u64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
