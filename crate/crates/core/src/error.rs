use thiserror::Error;

/// Maximum number of vertices a [`Graph`](crate::Graph) or
/// [`Hypergraph`](crate::Hypergraph) may have; vertex sets are single words.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("{count} vertices exceeds the supported maximum of {max}")]
    TooManyVertices { count: usize, max: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("hyperedges must be nonempty")]
    EmptyEdge,

    #[error("{0} is not an edge of the hypergraph")]
    NotAnEdge(String),

    #[error("invalid edge ordering: {0}")]
    InvalidOrdering(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is not K_{0}-covered")]
    NotCovered(usize),

    #[error("{count} vertices exceeds the canonical labeling limit of {limit}")]
    SizeLimit { count: usize, limit: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("majorization precondition violated: {0}")]
    Majorization(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
