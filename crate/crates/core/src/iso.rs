//! Canonical forms and isomorphism testing at desk scale.
//!
//! Graphs and hypergraphs share one engine: a set system on `0..N` (graph
//! edges are 2-sets). The search is individualization-refinement. Each node
//! holds an ordered partition of the vertices which is refined until no cell
//! splits; a vertex's signature is the sorted multiset, over its incident
//! edges, of the cell indices of the other members. Leaves are discrete
//! partitions and yield a relabeling; the certificate is the sorted list of
//! relabeled edge masks, and the canonical form is the smallest certificate
//! over all explored leaves.
//!
//! Two kinds of automorphisms prune sibling branches: vertex transpositions
//! that fix the edge set (twins), and automorphisms discovered when two
//! leaves produce the same certificate. Both fix the current path pointwise,
//! so skipped subtrees are images of explored ones.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;
use crate::set::VertexSet;

/// Default vertex limit for graph canonical keys.
pub const GRAPH_LIMIT: usize = 12;
/// Default vertex limit for hypergraph canonical keys.
pub const HYPERGRAPH_LIMIT: usize = 10;

const GRAPH_TAG: u8 = b'G';
const HYPERGRAPH_TAG: u8 = b'H';

/// Byte serialization of an isomorphism class: kind tag, vertex count, edge
/// count, then the relabeled edge masks in increasing order. Equal keys iff
/// isomorphic objects.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

/// Objects with a canonical form.
pub trait Canonize {
    /// Vertex count, checked against the limit.
    fn order(&self) -> usize;
    fn default_limit(&self) -> usize;
    fn tag(&self) -> u8;
    /// Edge masks of the underlying set system.
    fn masks(&self) -> Vec<u64>;
}

impl Canonize for Graph {
    fn order(&self) -> usize {
        self.vertex_count()
    }

    fn default_limit(&self) -> usize {
        GRAPH_LIMIT
    }

    fn tag(&self) -> u8 {
        GRAPH_TAG
    }

    fn masks(&self) -> Vec<u64> {
        self.edges().map(|(u, v)| 1u64 << u | 1u64 << v).collect()
    }
}

impl Canonize for Hypergraph {
    fn order(&self) -> usize {
        self.vertex_count()
    }

    fn default_limit(&self) -> usize {
        HYPERGRAPH_LIMIT
    }

    fn tag(&self) -> u8 {
        HYPERGRAPH_TAG
    }

    fn masks(&self) -> Vec<u64> {
        self.edges().iter().map(|e| e.bits()).collect()
    }
}

/// Canonical key under the default size limit.
pub fn canonical_key<T: Canonize + ?Sized>(x: &T) -> Result<CanonicalKey> {
    canonical_key_with_limit(x, x.default_limit())
}

pub fn canonical_key_with_limit<T: Canonize + ?Sized>(x: &T, limit: usize) -> Result<CanonicalKey> {
    Ok(canonical_form(x, limit)?.key)
}

/// Equivalent to comparing canonical keys.
pub fn are_isomorphic<T: Canonize + ?Sized>(a: &T, b: &T) -> Result<bool> {
    if a.order() != b.order() {
        return Ok(false);
    }
    let (ma, mb) = (a.masks(), b.masks());
    if ma.len() != mb.len() || size_profile(&ma) != size_profile(&mb) {
        // still enforce the size limit so the contract does not depend on input
        check_limit(a.order(), a.default_limit())?;
        return Ok(false);
    }
    Ok(canonical_key(a)? == canonical_key(b)?)
}

/// The canonical relabeling of a graph together with its key.
pub fn canonical_graph(g: &Graph) -> Result<(Graph, CanonicalKey)> {
    canonical_graph_with_limit(g, GRAPH_LIMIT)
}

pub fn canonical_graph_with_limit(g: &Graph, limit: usize) -> Result<(Graph, CanonicalKey)> {
    let form = canonical_form(g, limit)?;
    let mut rows = vec![0u64; g.vertex_count()];
    for m in &form.certificate {
        let (u, v) = (m.trailing_zeros() as usize, 63 - m.leading_zeros() as usize);
        rows[u] |= 1u64 << v;
        rows[v] |= 1u64 << u;
    }
    Ok((Graph::from_rows(g.vertex_count(), rows), form.key))
}

/// Canonical relabeling of a hypergraph together with its key.
pub fn canonical_hypergraph(h: &Hypergraph) -> Result<(Hypergraph, CanonicalKey)> {
    let form = canonical_form(h, HYPERGRAPH_LIMIT)?;
    let edges = form.certificate.iter().map(|&m| VertexSet::from_bits(m)).collect();
    Ok((Hypergraph::from_sets_unchecked(h.vertex_count(), edges), form.key))
}

fn size_profile(masks: &[u64]) -> Vec<u32> {
    let mut p: Vec<u32> = masks.iter().map(|m| m.count_ones()).collect();
    p.sort_unstable();
    p
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::SizeLimit { count: n, limit })
    } else {
        Ok(())
    }
}

struct Form {
    certificate: Vec<u64>,
    key: CanonicalKey,
}

fn canonical_form<T: Canonize + ?Sized>(x: &T, limit: usize) -> Result<Form> {
    let n = x.order();
    check_limit(n, limit)?;
    let masks = x.masks();
    let (certificate, _) = canonical_labeling(n, &masks);

    let width = n.div_ceil(8).max(1);
    let mut bytes = Vec::with_capacity(4 + width * certificate.len());
    bytes.push(x.tag());
    bytes.push(n as u8);
    bytes.extend_from_slice(&(certificate.len() as u32).to_be_bytes());
    for m in &certificate {
        bytes.extend_from_slice(&m.to_be_bytes()[8 - width..]);
    }
    Ok(Form {
        certificate,
        key: CanonicalKey(bytes),
    })
}

/// Returns the minimal certificate and a labeling (vertex -> position)
/// achieving it.
pub(crate) fn canonical_labeling(n: usize, masks: &[u64]) -> (Vec<u64>, Vec<usize>) {
    let mut sorted_edges = masks.to_vec();
    sorted_edges.sort_unstable();
    sorted_edges.dedup();
    let mut incident = vec![Vec::new(); n];
    for &m in &sorted_edges {
        for v in VertexSet::from_bits(m) {
            incident[v].push(m & !(1u64 << v));
        }
    }
    let simple_graph = sorted_edges.iter().all(|m| m.count_ones() == 2);
    let mut search = Search {
        n,
        edges: sorted_edges,
        incident,
        simple_graph,
        best: None,
        automorphisms: Vec::new(),
    };
    let root = if n == 0 { Vec::new() } else { vec![(0..n).collect()] };
    let mut path = Vec::new();
    search.descend(root, &mut path);
    search.best.unwrap_or_default()
}

type Cells = Vec<Vec<usize>>;

struct Search {
    n: usize,
    edges: Vec<u64>,
    /// Per vertex: each incident edge with the vertex itself removed.
    incident: Vec<Vec<u64>>,
    simple_graph: bool,
    best: Option<(Vec<u64>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search {
    fn cell_index(&self, cells: &Cells) -> Vec<u8> {
        let mut idx = vec![0u8; self.n];
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                idx[v] = i as u8;
            }
        }
        idx
    }

    fn signature(&self, v: usize, idx: &[u8], cell_masks: &[u64]) -> Vec<u8> {
        if self.simple_graph {
            let row = self.incident[v].iter().fold(0u64, |a, m| a | m);
            return cell_masks.iter().map(|c| (row & c).count_ones() as u8).collect();
        }
        let mut parts: Vec<Vec<u8>> = self.incident[v]
            .iter()
            .map(|&m| {
                let mut p: Vec<u8> = VertexSet::from_bits(m).iter().map(|u| idx[u]).collect();
                p.sort_unstable();
                p
            })
            .collect();
        parts.sort_unstable();
        let mut sig = Vec::new();
        for p in parts {
            sig.push(p.len() as u8);
            sig.extend(p);
        }
        sig
    }

    fn refine(&self, mut cells: Cells) -> Cells {
        loop {
            let idx = self.cell_index(&cells);
            let cell_masks: Vec<u64> = cells
                .iter()
                .map(|c| c.iter().fold(0u64, |a, &v| a | 1u64 << v))
                .collect();
            let mut next: Cells = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u8>, usize)> = cell
                    .iter()
                    .map(|&v| (self.signature(v, &idx, &cell_masks), v))
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                        start = i;
                    }
                }
            }
            if next.len() == cells.len() {
                return next;
            }
            cells = next;
        }
    }

    fn descend(&mut self, cells: Cells, path: &mut Vec<usize>) {
        let cells = self.refine(cells);
        let Some(ti) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(&cells);
            return;
        };
        let target = cells[ti].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &w in &target {
            if explored.iter().any(|&v| self.equivalent(v, w, path)) {
                continue;
            }
            let mut child: Cells = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..ti]);
            child.push(vec![w]);
            child.push(target.iter().copied().filter(|&u| u != w).collect());
            child.extend_from_slice(&cells[ti + 1..]);
            path.push(w);
            self.descend(child, path);
            path.pop();
            explored.push(w);
        }
    }

    fn leaf(&mut self, cells: &Cells) {
        let mut label = vec![0usize; self.n];
        for (pos, c) in cells.iter().enumerate() {
            label[c[0]] = pos;
        }
        let mut cert: Vec<u64> = self
            .edges
            .iter()
            .map(|&m| VertexSet::from_bits(m).iter().fold(0u64, |a, v| a | 1u64 << label[v]))
            .collect();
        cert.sort_unstable();
        match &self.best {
            None => self.best = Some((cert, label)),
            Some((best, best_label)) => match cert.cmp(best) {
                std::cmp::Ordering::Less => self.best = Some((cert, label)),
                std::cmp::Ordering::Equal => {
                    let mut inverse = vec![0usize; self.n];
                    for (v, &p) in best_label.iter().enumerate() {
                        inverse[p] = v;
                    }
                    let gamma: Vec<usize> = label.iter().map(|&p| inverse[p]).collect();
                    if gamma.iter().enumerate().any(|(v, &g)| v != g) {
                        self.automorphisms.push(gamma);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    /// Is there a known automorphism fixing `path` pointwise and mapping
    /// `v` to `w`?
    fn equivalent(&self, v: usize, w: usize, path: &[usize]) -> bool {
        if self.transposition_is_automorphism(v, w) {
            return true;
        }
        let fixing: Vec<&Vec<usize>> = self
            .automorphisms
            .iter()
            .filter(|g| path.iter().all(|&p| g[p] == p))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in fixing {
            for (x, &gx) in g.iter().enumerate().take(self.n) {
                let (a, b) = (find(&mut parent, x), find(&mut parent, gx));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        find(&mut parent, v) == find(&mut parent, w)
    }

    fn transposition_is_automorphism(&self, v: usize, w: usize) -> bool {
        let (bv, bw) = (1u64 << v, 1u64 << w);
        self.edges.iter().all(|&m| {
            let (hv, hw) = (m & bv != 0, m & bw != 0);
            if hv == hw {
                return true;
            }
            let swapped = m ^ bv ^ bw;
            self.edges.binary_search(&swapped).is_ok()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Oracle: minimum over all N! relabelings of the sorted edge masks.
    fn brute_form(n: usize, masks: &[u64]) -> Vec<u64> {
        (0..n)
            .permutations(n)
            .map(|p| {
                let mut c: Vec<u64> = masks
                    .iter()
                    .map(|&m| VertexSet::from_bits(m).iter().fold(0u64, |a, v| a | 1u64 << p[v]))
                    .collect();
                c.sort_unstable();
                c
            })
            .min()
            .unwrap_or_default()
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut g = Graph::empty(n).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn relabeled_paths_match() {
        let a = path(3);
        let b = Graph::from_edges(3, [(2, 0), (0, 1)]).unwrap();
        assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
        assert!(!are_isomorphic(&cycle(4), &path(4)).unwrap());
    }

    #[test]
    fn isomorphism_examples() {
        // S_{5,1} is the star K_{1,4}.
        let s51 = Graph::from_edges(5, (1..5).map(|v| (0, v))).unwrap();
        let star = Graph::from_edges(5, (0..4).map(|v| (v, 4))).unwrap();
        assert!(are_isomorphic(&s51, &star).unwrap());
        let k3 = Graph::complete(3).unwrap();
        assert!(!are_isomorphic(&k3.disjoint_union(&k3).unwrap(), &cycle(6)).unwrap());
        assert!(are_isomorphic(&cycle(6), &cycle(6)).unwrap());
    }

    #[test]
    fn switched_hypergraph_differs() {
        let h = Hypergraph::from_lists(6, [[0, 1, 2], [1, 3, 4], [2, 3, 5]]).unwrap();
        let s = Hypergraph::from_lists(6, [[0, 1, 2], [0, 3, 4], [0, 3, 5]]).unwrap();
        assert_ne!(canonical_key(&h).unwrap(), canonical_key(&s).unwrap());
    }

    #[test]
    fn graph_and_hypergraph_keys_differ() {
        let g = Graph::complete(3).unwrap();
        let h = Hypergraph::from_graph(&g);
        assert_ne!(canonical_key(&g).unwrap(), canonical_key(&h).unwrap());
    }

    #[test]
    fn size_limits() {
        let g = Graph::empty(13).unwrap();
        assert_eq!(canonical_key(&g), Err(Error::SizeLimit { count: 13, limit: 12 }));
        assert!(canonical_key_with_limit(&g, 20).is_ok());
        let h = Hypergraph::empty(11).unwrap();
        assert_eq!(canonical_key(&h), Err(Error::SizeLimit { count: 11, limit: 10 }));
    }

    #[test]
    fn symmetric_graphs_are_fast_and_consistent() {
        // Large automorphism groups exercise both pruning rules.
        let k3 = Graph::complete(3).unwrap();
        let four = k3
            .disjoint_union(&k3)
            .unwrap()
            .disjoint_union(&k3.disjoint_union(&k3).unwrap())
            .unwrap();
        let shuffled = four.permuted(&[11, 3, 7, 0, 5, 9, 1, 10, 2, 8, 4, 6]).unwrap();
        assert!(are_isomorphic(&four, &shuffled).unwrap());
        for g in [Graph::empty(12).unwrap(), Graph::complete(12).unwrap(), cycle(12)] {
            let key = canonical_key(&g).unwrap();
            let p: Vec<usize> = (0..12).rev().collect();
            assert_eq!(key, canonical_key(&g.permuted(&p).unwrap()).unwrap());
        }
    }

    #[test]
    fn canonical_graph_is_isomorphic_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(0..=9);
            let g = random_graph(&mut rng, n, 0.4);
            let (c, key) = canonical_graph(&g).unwrap();
            assert_eq!(c.edge_count(), g.edge_count());
            assert_eq!(canonical_key(&c).unwrap(), key);
            let (c2, _) = canonical_graph(&c).unwrap();
            assert_eq!(c, c2);
        }
    }

    #[test]
    fn thousand_random_relabelings() {
        let mut rng = ChaCha8Rng::seed_from_u64(1000);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=12);
            let density = rng.gen_range(0.1..0.9);
            let g = random_graph(&mut rng, n, density);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            assert!(are_isomorphic(&g, &g.permuted(&perm).unwrap()).unwrap());
        }
    }

    #[test]
    fn agrees_with_brute_force_on_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7);
            let a = random_graph(&mut rng, n, 0.5);
            // half the time a near-copy, so the iso case is frequent
            let b = if rng.gen_bool(0.5) {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                a.permuted(&perm).unwrap()
            } else {
                random_graph(&mut rng, n, 0.5)
            };
            let oracle = brute_form(n, &a.masks()) == brute_form(n, &b.masks());
            assert_eq!(are_isomorphic(&a, &b).unwrap(), oracle, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn agrees_with_brute_force_on_hypergraphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7);
            let m = rng.gen_range(0..=6);
            let edges: Vec<VertexSet> = (0..m)
                .map(|_| VertexSet::from_bits(rng.gen_range(1u64..(1u64 << n))))
                .collect();
            let a = Hypergraph::new(n, edges).unwrap();
            let b = if rng.gen_bool(0.5) {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                a.permuted(&perm).unwrap()
            } else {
                // same sizes, shuffled membership
                let edges: Vec<VertexSet> = a
                    .edges()
                    .iter()
                    .map(|e| {
                        let mut vs: Vec<usize> = (0..n).collect();
                        vs.shuffle(&mut rng);
                        vs.into_iter().take(e.len()).collect()
                    })
                    .collect();
                Hypergraph::new(n, edges).unwrap()
            };
            let oracle = brute_form(n, &a.masks()) == brute_form(n, &b.masks());
            assert_eq!(are_isomorphic(&a, &b).unwrap(), oracle, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn degree_mismatch_implies_different_keys() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(2..=9);
            let a = random_graph(&mut rng, n, 0.5);
            let b = random_graph(&mut rng, n, 0.5);
            let (mut da, mut db) = (a.degrees(), b.degrees());
            da.sort_unstable();
            db.sort_unstable();
            if da != db {
                assert_ne!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
            }
        }
    }

    #[test]
    fn key_is_stable_across_runs() {
        // Pinned bytes: a platform- or run-dependent key would change these.
        let p3 = path(3);
        assert_eq!(canonical_key(&p3).unwrap().to_hex(), "4703000000020506");
    }

    proptest! {
        #[test]
        fn key_invariant_under_relabeling(bits in prop::collection::vec(any::<bool>(), 36), seed in any::<u64>()) {
            let n = 9;
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let g = Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(p, _)| p)).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(canonical_key(&g).unwrap(), canonical_key(&g.permuted(&perm).unwrap()).unwrap());
        }
    }
}
