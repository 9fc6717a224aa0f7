use thiserror::Error;

use crate::topology::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("complete graph on {0} vertices is too small, at least 4 are required")]
    UnsupportedSize(usize),

    #[error("no CIST construction for L-RCube({n},{m},{k}): {reason}")]
    UnsupportedParameters {
        n: usize,
        m: usize,
        k: usize,
        reason: &'static str,
    },

    #[error("invalid address {0}")]
    InvalidAddress(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("vertex {0} is an inner vertex of both trees, the pair is not a dual-CIST")]
    NotDualCist(VertexId),

    #[error("graph has {vertices} vertices, above the cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }
}
