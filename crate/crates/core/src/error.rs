use thiserror::Error;

/// Errors produced by the expansion and oracle routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular input: {0}")]
    Singular(String),
    #[error("moment does not exist: {reason} (index {index})")]
    InfiniteMoment { index: usize, reason: String },
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("value is not representable exactly: {0}")]
    Inexact(String),
    #[error("distribution {dist} lacks capability {capability}")]
    Capability { dist: String, capability: &'static str },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn infinite(index: usize, reason: impl Into<String>) -> Self {
        Error::InfiniteMoment {
            index,
            reason: reason.into(),
        }
    }

    pub fn is_infinite_moment(&self) -> bool {
        matches!(self, Error::InfiniteMoment { .. })
    }
}
