use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),

    #[error("unknown edge `{0}`-`{1}`")]
    UnknownEdge(VertexId, VertexId),

    #[error("self-loop on `{0}`")]
    SelfLoop(VertexId),

    #[error("vertex `{0}` is both deleted and contracted")]
    OverlappingSpec(VertexId),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("auxiliary graph is not bipartite")]
    NotBipartite,

    #[error("invalid obstruction spec: {0}")]
    InvalidSpec(String),

    #[error("graph has {actual} vertices, exceeding the limit of {limit}")]
    SizeLimit { limit: usize, actual: usize },

    #[error("search cancelled")]
    Cancelled,

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
