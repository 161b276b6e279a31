//! Simple hypergraphs, pivot orderings and the degree-product potential.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result, MAX_VERTICES};
use crate::graph::Graph;
use crate::set::VertexSet;

/// A simple hypergraph on `0..N`: a set of distinct nonempty edges.
///
/// Edges are kept sorted (lexicographically on their member lists) and
/// deduplicated, so two hypergraphs are equal iff they have the same edge
/// sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<VertexSet>,
}

impl Hypergraph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                count: n,
                max: MAX_VERTICES,
            });
        }
        Ok(Hypergraph { n, edges: Vec::new() })
    }

    /// Builds a hypergraph; repeated edges are merged.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = VertexSet>,
    {
        let mut h = Hypergraph::empty(n)?;
        let all = VertexSet::prefix(n);
        for e in edges {
            if e.is_empty() {
                return Err(Error::EmptyEdge);
            }
            if !e.is_subset(all) {
                let vertex = e.difference(all).min().unwrap_or(n);
                return Err(Error::VertexOutOfRange { vertex, count: n });
            }
            h.edges.push(e);
        }
        h.normalize();
        Ok(h)
    }

    /// Convenience constructor from vertex lists.
    pub fn from_lists<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        let mut sets = Vec::new();
        for e in edges {
            let e = e.as_ref();
            if let Some(&v) = e.iter().find(|&&v| v >= n.min(MAX_VERTICES)) {
                return Err(Error::VertexOutOfRange { vertex: v, count: n });
            }
            sets.push(e.iter().copied().collect());
        }
        Hypergraph::new(n, sets)
    }

    /// Builds without validation; callers guarantee range and nonemptiness.
    pub(crate) fn from_sets_unchecked(n: usize, edges: Vec<VertexSet>) -> Self {
        let mut h = Hypergraph { n, edges };
        h.normalize();
        h
    }

    /// Sorts and merges duplicates, returning how many edges were merged away.
    fn normalize(&mut self) -> usize {
        let before = self.edges.len();
        self.edges.sort_unstable();
        self.edges.dedup();
        before - self.edges.len()
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::prefix(self.n)
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn contains_edge(&self, e: VertexSet) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn edge_index(&self, e: VertexSet) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// `d_H(S)`: number of edges containing `s`.
    pub fn degree_of_set(&self, s: VertexSet) -> usize {
        self.edges.iter().filter(|e| s.is_subset(**e)).count()
    }

    /// 1-degree `d_1(v)`.
    pub fn degree1(&self, v: usize) -> Result<usize> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.n,
            });
        }
        Ok(self.edges.iter().filter(|e| e.contains(v)).count())
    }

    /// All 1-degrees, indexed by vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for v in *e {
                d[v] += 1;
            }
        }
        d
    }

    /// `Δ_1(H)`, or `None` on zero vertices.
    pub fn max_degree(&self) -> Option<usize> {
        self.degrees().into_iter().max()
    }

    /// `δ_1(H)`, or `None` on zero vertices.
    pub fn min_degree(&self) -> Option<usize> {
        self.degrees().into_iter().min()
    }

    /// Vertices that lie in no edge.
    pub fn isolated_vertices(&self) -> VertexSet {
        let covered = self
            .edges
            .iter()
            .fold(VertexSet::EMPTY, |acc, e| acc.union(*e));
        self.vertices().difference(covered)
    }

    /// `N_H(S) = { T : S ∪ T ∈ E }`, with `T` disjoint from `S`.
    pub fn link(&self, s: VertexSet) -> Vec<VertexSet> {
        self.edges
            .iter()
            .filter(|e| s.is_subset(**e))
            .map(|e| e.difference(s))
            .collect()
    }

    /// The `s`-shadow: `s`-sets contained in some edge, on the same vertices.
    pub fn shadow(&self, s: usize) -> Result<Hypergraph> {
        if s == 0 {
            return Err(Error::InvalidParameter("shadow size must be at least 1".into()));
        }
        let mut out = Vec::new();
        for e in &self.edges {
            if e.len() >= s {
                subsets_of_size(*e, s, &mut out);
            }
        }
        Ok(Hypergraph::from_sets_unchecked(self.n, out))
    }

    /// The 2-shadow as a [`Graph`].
    pub fn shadow_graph(&self) -> Graph {
        let mut adj = vec![0u64; self.n];
        for e in &self.edges {
            for v in *e {
                adj[v] |= e.bits() & !(1u64 << v);
            }
        }
        Graph::from_rows(self.n, adj)
    }

    /// Hypergraph whose edges are the edges of `g`.
    pub fn from_graph(g: &Graph) -> Hypergraph {
        let edges = g
            .edges()
            .map(|(u, v)| VertexSet::singleton(u).union(VertexSet::singleton(v)))
            .collect();
        Hypergraph::from_sets_unchecked(g.vertex_count(), edges)
    }

    /// `Some(graph)` when every edge has exactly two vertices.
    pub fn to_graph(&self) -> Option<Graph> {
        self.edges.iter().all(|e| e.len() == 2).then(|| self.shadow_graph())
    }

    /// `f(H)`: product of all 1-degrees.
    pub fn potential(&self) -> PotentialValue {
        PotentialValue::product(self.degrees())
    }

    /// Connected iff there are no isolated vertices and the edges link all
    /// vertices together. The hypergraph on zero vertices is connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        if !self.isolated_vertices().is_empty() {
            return false;
        }
        let mut comp = self.edges[0];
        loop {
            let grown = self
                .edges
                .iter()
                .filter(|e| e.intersects(comp))
                .fold(comp, |acc, e| acc.union(*e));
            if grown == comp {
                break;
            }
            comp = grown;
        }
        comp == self.vertices()
    }

    /// `H - A`: delete the vertices of `a`, replace every edge `e` by `e - A`,
    /// drop edges that become empty and merge duplicates. Remaining vertices
    /// are relabeled in increasing order.
    pub fn remove_vertices(&self, a: VertexSet) -> Hypergraph {
        let keep = self.vertices().difference(a);
        let mut index = [usize::MAX; MAX_VERTICES];
        for (i, v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.difference(a))
            .filter(|e| !e.is_empty())
            .map(|e| e.iter().map(|v| index[v]).collect())
            .collect();
        Hypergraph::from_sets_unchecked(keep.len(), edges)
    }

    /// Replaces the edge list wholesale, merging duplicates; returns the
    /// merge count alongside.
    pub(crate) fn rebuilt(n: usize, edges: Vec<VertexSet>) -> (Hypergraph, usize) {
        let mut h = Hypergraph { n, edges };
        let merged = h.normalize();
        (h, merged)
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Hypergraph> {
        if perm.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        Hypergraph::new(
            self.n,
            self.edges.iter().map(|e| e.iter().map(|v| perm[v]).collect()),
        )
    }

    /// Edges as sorted vertex lists.
    pub fn edge_lists(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|e| e.to_vec()).collect()
    }
}

fn subsets_of_size(e: VertexSet, s: usize, out: &mut Vec<VertexSet>) {
    fn go(rest: VertexSet, need: usize, acc: VertexSet, out: &mut Vec<VertexSet>) {
        if need == 0 {
            out.push(acc);
            return;
        }
        if rest.len() < need {
            return;
        }
        let v = rest.min().unwrap();
        let tail = rest.difference(VertexSet::singleton(v));
        go(tail, need - 1, acc.union(VertexSet::singleton(v)), out);
        go(tail, need, acc, out);
    }
    go(e, s, VertexSet::EMPTY, out);
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph({}, [", self.n)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "])")
    }
}

impl Serialize for Hypergraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Hypergraph", 2)?;
        st.serialize_field("vertex_count", &self.n)?;
        st.serialize_field("edges", &self.edge_lists())?;
        st.end()
    }
}

/// An edge of a hypergraph with a fixed order `(v_1, ..., v_n)` on its
/// vertices; the pivot of an edge switch.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrderedEdge {
    vertices: Vec<usize>,
}

impl OrderedEdge {
    /// Validates that `vertices` has no repeats and, as a set, is an edge of `h`.
    pub fn new(h: &Hypergraph, vertices: Vec<usize>) -> Result<Self> {
        let mut set = VertexSet::EMPTY;
        for &v in &vertices {
            if v >= h.vertex_count() {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    count: h.vertex_count(),
                });
            }
            if set.contains(v) {
                return Err(Error::InvalidOrdering(format!("vertex {v} repeated")));
            }
            set.insert(v);
        }
        if !h.contains_edge(set) {
            return Err(Error::NotAnEdge(set.to_string()));
        }
        Ok(OrderedEdge { vertices })
    }

    /// Increasing vertex order.
    pub fn sorted(h: &Hypergraph, e: VertexSet) -> Result<Self> {
        OrderedEdge::new(h, e.to_vec())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn as_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `{v_1, ..., v_k}`.
    pub fn prefix(&self, k: usize) -> VertexSet {
        self.vertices[..k.min(self.vertices.len())].iter().copied().collect()
    }
}

/// Exact value of the degree-product potential `f(H)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PotentialValue(BigUint);

impl PotentialValue {
    pub fn product<I: IntoIterator<Item = usize>>(factors: I) -> Self {
        let mut acc = BigUint::one();
        for d in factors {
            if d == 0 {
                return PotentialValue(BigUint::zero());
            }
            acc *= BigUint::from(d);
        }
        PotentialValue(acc)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for PotentialValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serialized as a decimal string so values beyond 64 bits stay exact.
impl Serialize for PotentialValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl From<u64> for PotentialValue {
    fn from(v: u64) -> Self {
        PotentialValue(BigUint::from(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::from_lists(n, edges.iter().copied()).unwrap()
    }

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn shadow_examples() {
        let tri = hg(3, &[&[0, 1, 2]]).shadow(2).unwrap();
        assert_eq!(tri.edge_lists(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);

        let two = hg(5, &[&[0, 1, 2], &[2, 3, 4]]).shadow(2).unwrap();
        assert_eq!(
            two.edge_lists(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
        assert_eq!(two.vertex_count(), 5);

        let none = Hypergraph::empty(4).unwrap();
        assert_eq!(none.shadow(2).unwrap().edge_count(), 0);
        assert_eq!(none.shadow(3).unwrap().edge_count(), 0);
        assert!(none.shadow(0).is_err());
    }

    #[test]
    fn shadow_skips_small_edges() {
        let h = hg(4, &[&[0], &[1, 2], &[0, 1, 3]]);
        assert_eq!(h.shadow(3).unwrap().edge_lists(), vec![vec![0, 1, 3]]);
        assert_eq!(h.shadow(1).unwrap().edge_count(), 4);
    }

    #[test]
    fn degree1_examples() {
        let h = hg(6, &[&[0, 1, 2], &[2, 3, 4]]);
        assert_eq!(h.degree1(2), Ok(2));
        assert_eq!(h.degree1(5), Ok(0));
        assert!(h.degree1(6).is_err());
        let fan = hg(7, &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6]]);
        assert_eq!(fan.degree1(0), Ok(3));
    }

    #[test]
    fn potential_examples() {
        assert_eq!(hg(5, &[&[0, 1, 2], &[2, 3, 4]]).potential(), 2.into());
        assert_eq!(Hypergraph::empty(3).unwrap().potential(), 0.into());
        assert_eq!(hg(6, &[&[0, 1, 2], &[1, 3, 4], &[2, 3, 5]]).potential(), 8.into());
    }

    #[test]
    fn potential_is_exact_beyond_u64() {
        // 40 vertices each in 8 edges: 8^40 = 2^120.
        let edges: Vec<VertexSet> = (0..8)
            .map(|k| (0..40).filter(|v| v % 8 != k).collect())
            .collect();
        let h = Hypergraph::new(40, edges).unwrap();
        assert!(h.degrees().iter().all(|&d| d == 7));
        let expected = BigUint::from(7u32).pow(40);
        assert_eq!(h.potential().value(), &expected);
    }

    #[test]
    fn connectivity_examples() {
        assert!(hg(5, &[&[0, 1, 2], &[2, 3, 4]]).is_connected());
        assert!(!hg(4, &[&[0, 1], &[2, 3]]).is_connected());
        assert!(!hg(4, &[&[0, 1, 2]]).is_connected());
        assert!(Hypergraph::empty(0).unwrap().is_connected());
        assert!(hg(1, &[&[0]]).is_connected());
    }

    #[test]
    fn remove_vertices_examples() {
        let h = hg(5, &[&[0, 1, 2], &[2, 3, 4]]);
        // {0,1},{3,4} relabeled onto 0..4
        assert_eq!(h.remove_vertices(set(&[2])).edge_lists(), vec![vec![0, 1], vec![2, 3]]);

        let h = hg(3, &[&[0, 1], &[0, 2]]);
        let r = h.remove_vertices(set(&[1, 2]));
        assert_eq!(r.vertex_count(), 1);
        assert_eq!(r.edge_lists(), vec![vec![0]]);

        let h = hg(2, &[&[0, 1]]);
        let r = h.remove_vertices(set(&[0, 1]));
        assert_eq!(r.edge_count(), 0);
        assert_eq!(r.vertex_count(), 0);

        assert_eq!(h.remove_vertices(VertexSet::EMPTY), h);
    }

    #[test]
    fn construction_merges_and_validates() {
        let h = hg(3, &[&[0, 1], &[1, 0], &[2]]);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(Hypergraph::from_lists(3, [vec![0usize, 3]]).unwrap_err(), Error::VertexOutOfRange { vertex: 3, count: 3 });
        assert_eq!(Hypergraph::new(3, [VertexSet::EMPTY]).unwrap_err(), Error::EmptyEdge);
    }

    #[test]
    fn ordered_edge_validation() {
        let h = hg(5, &[&[0, 1, 2], &[2, 3, 4]]);
        assert!(OrderedEdge::new(&h, vec![2, 0, 1]).is_ok());
        assert!(matches!(OrderedEdge::new(&h, vec![0, 0, 1]), Err(Error::InvalidOrdering(_))));
        assert!(matches!(OrderedEdge::new(&h, vec![0, 1]), Err(Error::NotAnEdge(_))));
        let e = OrderedEdge::new(&h, vec![2, 0, 1]).unwrap();
        assert_eq!(e.prefix(2), set(&[0, 2]));
    }

    #[test]
    fn link_and_set_degree() {
        let h = hg(5, &[&[0, 1, 2], &[0, 1, 3], &[2, 3, 4]]);
        assert_eq!(h.degree_of_set(set(&[0, 1])), 2);
        assert_eq!(h.link(set(&[0, 1])), vec![set(&[2]), set(&[3])]);
    }
}
