pub mod counting;
pub mod covering;
mod error;
pub mod graph;
pub mod hypergraph;
pub mod iso;
pub mod par;
pub mod set;
pub mod switching;
pub mod text;
pub mod verify;

pub use error::{Error, Result, MAX_VERTICES};
pub use graph::Graph;
pub use hypergraph::{Hypergraph, OrderedEdge, PotentialValue};
pub use iso::CanonicalKey;
pub use par::Exec;
pub use set::VertexSet;
