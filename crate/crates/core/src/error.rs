use thiserror::Error;

/// Error taxonomy shared by every module.
///
/// `Domain` covers bad arguments (a non-prime modulus, an invalid
/// discriminant, an interval outside its range).  `Consistency` is the loud
/// failure mode: two independent computation routes that must agree did not,
/// and the message names the offending inputs.  `Integrity` means persisted
/// data failed its checksum or re-verification.  `Reduction` marks a
/// curve/prime pair with bad reduction, `Resource` a request over the
/// supported capacity, and `Io` wraps filesystem failures for caches.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain: {0}")]
    Domain(String),
    #[error("consistency: {0}")]
    Consistency(String),
    #[error("resource: {0}")]
    Resource(String),
    #[error("integrity: {0}")]
    Integrity(String),
    #[error("reduction: {0}")]
    Reduction(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    pub fn reduction(msg: impl Into<String>) -> Self {
        Error::Reduction(msg.into())
    }

    /// Short machine-readable kind tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Consistency(_) => "consistency",
            Error::Resource(_) => "resource",
            Error::Integrity(_) => "integrity",
            Error::Reduction(_) => "reduction",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
