use alloc::string::String;
use alloc::vec::Vec;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("size limit exceeded: {what} is {value}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("zero entry at subset {0:?}")]
    ZeroEntry(Vec<usize>),
    #[error("oracle failure at {index}: {message}")]
    Oracle { index: String, message: String },
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn size_limit(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::SizeLimit { what, value, limit })
    } else {
        Ok(())
    }
}
