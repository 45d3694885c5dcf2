use alloc::string::String;
use alloc::vec::Vec;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range for {len} sites")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("rank-deficient design matrix; dependent sectors: {dependent:?}")]
    RankDeficient { dependent: Vec<String> },
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("missing keys: {0:?}")]
    MissingKeys(Vec<String>),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArguments(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
