//! `K_n`-covered graphs, their clique hypergraphs, edge-critical reduction,
//! the named extremal constructions, and auditors for the structural facts
//! about edge-critical graphs.

use serde::Serialize;

use crate::counting::{
    choose, choose_signed, cliques_within, count_independent_sets, count_independent_sets_within,
    has_clique_through,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;
use crate::set::VertexSet;

/// `N = q·n + r` with `0 <= r < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverParams {
    pub n: usize,
    #[serde(rename = "N")]
    pub vertex_count: usize,
    pub q: usize,
    pub r: usize,
}

impl CoverParams {
    pub fn new(n: usize, vertex_count: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("clique size n must be at least 1".into()));
        }
        Ok(CoverParams {
            n,
            vertex_count,
            q: vertex_count / n,
            r: vertex_count % n,
        })
    }
}

/// Every vertex lies in at least one `n`-clique.
pub fn is_kn_covered(g: &Graph, n: usize) -> bool {
    if n == 0 {
        return true;
    }
    (0..g.vertex_count()).all(|v| has_clique_through(g, v, n))
}

/// The `n`-uniform hypergraph whose edges are the `n`-cliques of `g`.
pub fn associated_hypergraph(g: &Graph, n: usize) -> Hypergraph {
    if n == 0 {
        return Hypergraph::empty(g.vertex_count()).expect("vertex count already validated");
    }
    let cliques = cliques_within(g, g.vertices(), n);
    Hypergraph::from_sets_unchecked(g.vertex_count(), cliques)
}

/// `true` iff `g` is `K_n`-covered and deleting any single edge breaks that.
pub fn is_edge_critical(g: &Graph, n: usize) -> bool {
    is_kn_covered(g, n) && g.edges().all(|(u, v)| !covered_without(g, n, u, v))
}

fn covered_without(g: &Graph, n: usize, u: usize, v: usize) -> bool {
    let mut h = g.clone();
    h.remove_edge(u, v).expect("edge endpoints are in range");
    // Only cliques through both u and v can have been lost.
    has_clique_through(&h, u, n) && has_clique_through(&h, v, n)
}

/// An edge-minimal `K_n`-covered spanning subgraph.
///
/// Edges are tried in increasing `(u, v)` order; after each successful
/// removal the scan restarts from the smallest remaining edge.
pub fn edge_critical_reduction(g: &Graph, n: usize) -> Result<Graph> {
    if !is_kn_covered(g, n) {
        return Err(Error::NotCovered(n));
    }
    let mut cur = g.clone();
    'scan: loop {
        for (u, v) in cur.edge_list() {
            if covered_without(&cur, n, u, v) {
                cur.remove_edge(u, v)?;
                continue 'scan;
            }
        }
        return Ok(cur);
    }
}

/// The four structural properties of an edge-critical `K_n`-covered graph,
/// each evaluated independently so a violation shows up as a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalityReport {
    pub is_covered: bool,
    pub is_edge_critical: bool,
    /// The 2-shadow of the clique hypergraph equals `g` as a labeled graph.
    pub shadow_equals_graph: bool,
    /// `i_t(g) = i_t` of the clique hypergraph, for the supplied `t`.
    pub it_equals: bool,
    /// Removing any hyperedge leaves one of its vertices in no hyperedge.
    pub hyperedge_removal_isolates: bool,
    pub min_degree: Option<usize>,
    /// `δ(g) = n − 1`.
    pub min_degree_is_n_minus_1: bool,
}

impl CriticalityReport {
    /// All four properties hold (only meaningful for edge-critical input).
    pub fn all_hold(&self) -> bool {
        self.shadow_equals_graph
            && self.it_equals
            && self.hyperedge_removal_isolates
            && self.min_degree_is_n_minus_1
    }
}

pub fn check_observation(g: &Graph, n: usize, t: usize) -> CriticalityReport {
    let is_covered = is_kn_covered(g, n);
    let is_edge_critical = is_covered && is_edge_critical(g, n);
    let assoc = associated_hypergraph(g, n);
    let shadow_equals_graph = assoc.shadow_graph() == *g;
    let it_equals = count_independent_sets(g, t) == count_independent_sets(&assoc, t);
    let degrees = assoc.degrees();
    let hyperedge_removal_isolates = assoc
        .edges()
        .iter()
        .all(|e| e.iter().any(|v| degrees[v] == 1));
    let min_degree = g.min_degree();
    CriticalityReport {
        is_covered,
        is_edge_critical,
        shadow_equals_graph,
        it_equals,
        hyperedge_removal_isolates,
        min_degree,
        min_degree_is_n_minus_1: min_degree == Some(n.saturating_sub(1)),
    }
}

/// `S_{N,k}`: a clique on `0..k` joined to an independent set on `k..N`.
pub fn make_split(vertex_count: usize, k: usize) -> Result<Graph> {
    if k > vertex_count {
        return Err(Error::InvalidParameter(format!(
            "split graph needs k <= N, got k = {k}, N = {vertex_count}"
        )));
    }
    let mut g = Graph::empty(vertex_count)?;
    for u in 0..k {
        for v in u + 1..vertex_count {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

/// Two copies of `K_n` sharing `n − r` vertices plus `q − 1` disjoint
/// copies of `K_n`, on `q·n + r` vertices. With `r = 0` the two copies
/// coincide, giving `q` disjoint cliques.
pub fn make_cl(n: usize, q: usize, r: usize) -> Result<Graph> {
    if n == 0 || q == 0 || r >= n {
        return Err(Error::InvalidParameter(format!(
            "construction needs n >= 1, q >= 1, 0 <= r < n; got n = {n}, q = {q}, r = {r}"
        )));
    }
    let mut g = Graph::empty(q * n + r)?;
    let clique = |g: &mut Graph, start: usize| -> Result<()> {
        for u in start..start + n {
            for v in u + 1..start + n {
                g.add_edge(u, v)?;
            }
        }
        Ok(())
    };
    clique(&mut g, 0)?;
    clique(&mut g, r)?;
    for j in 1..q {
        clique(&mut g, r + j * n)?;
    }
    Ok(g)
}

/// `k_t` of the construction: `(q + 1)·C(n, t) − C(n − r, t)`.
pub fn cl_clique_count(n: usize, q: usize, r: usize, t: usize) -> u64 {
    (q as u64 + 1) * choose(n, t) - choose(n - r, t)
}

/// Outcome of the `t >= 4` induction-step audit on one graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InductionAudit {
    /// Chosen vertex of degree `n − 1` (smallest label).
    pub v: usize,
    /// `S = { u ∈ N[v] : d(u) = n − 1 }`.
    pub low_set: Vec<usize>,
    pub s: usize,
    /// `S` is a clique lying in exactly one `n`-clique.
    pub s_in_unique_clique: bool,
    /// `G − S` is still `K_n`-covered.
    pub remainder_covered: bool,
    pub i_t: u64,
    /// Independent `t`-sets missing `S`.
    pub a: u64,
    /// Independent `t`-sets meeting `S` in one vertex.
    pub b: u64,
    pub i_t_remainder: u64,
    pub i_t_minus_1_remainder: u64,
    /// `C(N − s − n + 1, t) + s·C(N − s − n + 1, t − 1)`.
    pub hypothesis_bound: u64,
    /// `C(N − n + 1, t)`, reached by telescoping.
    pub final_bound: u64,
    pub a_matches: bool,
    pub b_bounded: bool,
    pub telescoping_holds: bool,
    pub bound_holds: bool,
}

/// Audits the chain
/// `i_t(G) = |A| + |B| <= i_t(G−S) + s·i_{t−1}(G−S) <= C(M, t) + s·C(M, t−1)
///  <= C(M, t) + Σ_{i<s} C(M + i, t − 1) = C(N − n + 1, t)`
/// with `M = N − s − n + 1`.
pub fn induction_step_audit(g: &Graph, n: usize, t: usize) -> Result<InductionAudit> {
    if t < 4 {
        return Err(Error::Precondition(format!("induction step needs t >= 4, got {t}")));
    }
    if n == 0 || !is_edge_critical(g, n) {
        return Err(Error::Precondition("graph must be edge-critical K_n-covered".into()));
    }
    let v = (0..g.vertex_count())
        .find(|&v| g.degree(v) == n - 1)
        .ok_or_else(|| Error::Precondition(format!("no vertex of degree {}", n - 1)))?;
    let low: VertexSet = g
        .closed_neighbors(v)
        .iter()
        .filter(|&u| g.degree(u) == n - 1)
        .collect();
    let s = low.len();
    let big_n = g.vertex_count();

    let containing = cliques_within(g, g.vertices(), n)
        .into_iter()
        .filter(|c| low.is_subset(*c))
        .count();
    let s_in_unique_clique = g.is_clique(low) && containing == 1;

    let rest = g.remove_vertices(low);
    let remainder_covered = is_kn_covered(&rest, n);
    let i_t = count_independent_sets(g, t);
    let a = count_independent_sets_within(g, g.vertices().difference(low), t);
    // S is a clique, so every independent set meets it at most once.
    let b = low
        .iter()
        .map(|u| {
            let outside = g.vertices().difference(low).difference(g.neighbors(u));
            count_independent_sets_within(g, outside, t - 1)
        })
        .sum::<u64>();
    let i_t_remainder = count_independent_sets(&rest, t);
    let i_t_minus_1_remainder = count_independent_sets(&rest, t - 1);

    let m = big_n as i64 - s as i64 - n as i64 + 1;
    let hypothesis_bound = choose_signed(m, t) + s as u64 * choose_signed(m, t - 1);
    let telescoped =
        choose_signed(m, t) + (0..s as i64).map(|i| choose_signed(m + i, t - 1)).sum::<u64>();
    let final_bound = choose_signed(big_n as i64 - n as i64 + 1, t);

    let a_matches = a == i_t_remainder;
    let b_bounded = b <= s as u64 * i_t_minus_1_remainder;
    let telescoping_holds = telescoped == final_bound && hypothesis_bound <= telescoped;
    let bound_holds = i_t == a + b
        && a_matches
        && b_bounded
        && i_t_remainder + s as u64 * i_t_minus_1_remainder <= hypothesis_bound
        && telescoping_holds
        && i_t <= final_bound;

    Ok(InductionAudit {
        v,
        low_set: low.to_vec(),
        s,
        s_in_unique_clique,
        remainder_covered,
        i_t,
        a,
        b,
        i_t_remainder,
        i_t_minus_1_remainder,
        hypothesis_bound,
        final_bound,
        a_matches,
        b_bounded,
        telescoping_holds,
        bound_holds,
    })
}
