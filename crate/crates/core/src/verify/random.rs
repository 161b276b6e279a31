//! Seeded instance generators. Instance `i` of a suite with seed `s` draws
//! from its own ChaCha8 stream seeded with `s + i`, so results do not depend
//! on how instances are spread over workers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::hypergraph::{Hypergraph, OrderedEdge};
use crate::set::VertexSet;

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index))
}

/// `G(n, p)`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n).expect("caller keeps n in range");
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

/// Between 1 and `max_edges` edges of mixed sizes (1 to `max_edge_size`) on
/// a pool of `max_vertices` labels; labels no edge uses are then dropped, so
/// the result has no isolated vertex and at most `max_vertices` vertices.
pub fn random_hypergraph<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_edges: usize,
    max_edge_size: usize,
) -> Hypergraph {
    let m = rng.gen_range(1..=max_edges.max(1));
    let edges: Vec<VertexSet> = (0..m).map(|_| random_edge(rng, max_vertices, max_edge_size, VertexSet::EMPTY)).collect();
    compress(max_vertices, edges)
}

/// Like [`random_hypergraph`] but every edge after the first meets the union
/// of the earlier ones, so the result is connected.
pub fn random_connected_hypergraph<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_edges: usize,
    max_edge_size: usize,
) -> Hypergraph {
    let m = rng.gen_range(1..=max_edges.max(1));
    let mut edges = Vec::with_capacity(m);
    let mut seen = VertexSet::EMPTY;
    for _ in 0..m {
        let e = random_edge(rng, max_vertices, max_edge_size, seen);
        seen = seen.union(e);
        edges.push(e);
    }
    compress(max_vertices, edges)
}

/// A random edge; when `anchor` is nonempty, one of its vertices is included.
fn random_edge<R: Rng>(rng: &mut R, pool: usize, max_size: usize, anchor: VertexSet) -> VertexSet {
    let size = rng.gen_range(1..=max_size.min(pool).max(1));
    let mut labels: Vec<usize> = (0..pool).collect();
    labels.shuffle(rng);
    let mut e: VertexSet = labels[..size].iter().copied().collect();
    if !anchor.is_empty() && !e.intersects(anchor) {
        let members = anchor.to_vec();
        let a = members[rng.gen_range(0..members.len())];
        let drop = e.to_vec()[rng.gen_range(0..size)];
        e.remove(drop);
        e.insert(a);
    }
    e
}

fn compress(pool: usize, edges: Vec<VertexSet>) -> Hypergraph {
    let h = Hypergraph::new(pool, edges).expect("edges are nonempty and in range");
    h.remove_vertices(h.isolated_vertices())
}

/// A uniformly random ordering of edge `e` of `h`.
pub fn random_ordering<R: Rng>(rng: &mut R, h: &Hypergraph, e: VertexSet) -> OrderedEdge {
    let mut vs = e.to_vec();
    vs.shuffle(rng);
    OrderedEdge::new(h, vs).expect("caller passes an edge of h")
}
