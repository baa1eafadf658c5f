use thiserror::Error;

/// Errors raised by the toolkit.
///
/// The variants map onto the exit classes of the command line front end:
/// resource errors are distinguished from validation-type failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("specification error: {0}")]
    Specification(String),

    #[error("resource cap exceeded: {what} needs {required} entries, cap is {cap}")]
    Resource { what: String, required: u128, cap: u128 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("factorization violated: {0}")]
    Factorization(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }

    pub(crate) fn resource(what: impl Into<String>, required: u128, cap: u128) -> Self {
        Error::Resource {
            what: what.into(),
            required,
            cap,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
