use thiserror::Error;

/// Errors produced by graph construction, queries and experiment plumbing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("edge ({u}, {v}) has invalid length {length}; lengths must be positive and finite")]
    InvalidLength { u: usize, v: usize, length: f64 },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("parallel edge between {u} and {v}")]
    ParallelEdge { u: usize, v: usize },

    #[error("graph is disconnected: vertex {unreachable} is unreachable from vertex 0")]
    Disconnected { unreachable: usize },

    #[error("every vertex has already been visited")]
    AllVisited,

    #[error("{what} limited to n <= {limit}, got n = {n}; {hint}")]
    SizeLimit {
        what: &'static str,
        n: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("step paths were not retained for this walk")]
    PathsNotRetained,

    #[error("instance has no coordinates; {0} requires a geometric model")]
    MissingCoordinates(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient replication: {0}")]
    InsufficientReplication(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
