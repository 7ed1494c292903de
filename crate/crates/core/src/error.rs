use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed DAG notation: {0}")]
    Notation(String),

    #[error("vertex {vertex} out of range for a graph on {d} vertices")]
    VertexOutOfRange { vertex: usize, d: usize },

    #[error("graphs on more than {max} vertices are not supported (got {d})")]
    TooManyVertices { d: usize, max: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("edge {from}->{to} would create a directed cycle")]
    Cycle { from: usize, to: usize },

    #[error("graph is cyclic")]
    Cyclic,

    #[error("vertex sets must be pairwise disjoint")]
    OverlappingSets,

    #[error("vertex count mismatch: {0} vs {1}")]
    VertexCountMismatch(usize, usize),

    #[error("invalid CPDAG: {0}")]
    InvalidCpdag(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid SEM specification: {0}")]
    InvalidSpec(String),

    #[error("density signature mismatch: {0}")]
    Signature(String),

    #[error("dataset error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
