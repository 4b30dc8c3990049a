use std::io;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph is not connected; extract the giant component first")]
    Disconnected,

    #[error("node {target} is unreachable from node {from}")]
    Unreachable { from: NodeId, target: NodeId },

    #[error("empty graph")]
    EmptyGraph,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed scheme dump: {0}")]
    Format(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }

    /// Process exit code for the CLI: 1 usage, 2 data, 3 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) => 1,
            Error::InvariantViolation(_) => 3,
            _ => 2,
        }
    }
}
