use std::io;

use thiserror::Error;

/// Errors produced by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group context mismatch: {0}")]
    ContextMismatch(String),

    #[error("empty operand: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coordinate overflow in {0}")]
    Overflow(&'static str),

    #[error("unsupported homomorphism: {0}")]
    UnsupportedKernel(String),

    #[error("quasicube spec rejected: {0}")]
    QuasicubeSpec(String),

    #[error("size bound exceeded: {what} has {size} elements, limit is {limit}")]
    SizeBound {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("search space too large: {0}")]
    SearchSpace(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
