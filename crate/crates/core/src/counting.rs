//! Exact counts of independent sets, cliques and vertex triples.
//!
//! Counts are backtracking searches over bit rows: the candidate set for the
//! next vertex is the current candidates above it, masked by its non-neighbors
//! (independent sets) or neighbors (cliques). Every count is at most
//! `C(64, 32) < 2^64`, so `u64` never overflows.

use std::borrow::Cow;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::graph::Graph;
use crate::hypergraph::Hypergraph;
use crate::set::VertexSet;

/// Anything whose independent sets are those of a 2-shadow.
///
/// A set meets every hyperedge in at most one vertex iff no two of its
/// members share a hyperedge, so hypergraph independence is a pairwise
/// condition on the 2-shadow.
pub trait PairwiseStructure {
    fn vertex_count(&self) -> usize;
    fn shadow_rows(&self) -> Cow<'_, [u64]>;
}

impl PairwiseStructure for Graph {
    fn vertex_count(&self) -> usize {
        Graph::vertex_count(self)
    }

    fn shadow_rows(&self) -> Cow<'_, [u64]> {
        Cow::Borrowed(self.rows())
    }
}

impl PairwiseStructure for Hypergraph {
    fn vertex_count(&self) -> usize {
        Hypergraph::vertex_count(self)
    }

    fn shadow_rows(&self) -> Cow<'_, [u64]> {
        Cow::Owned(self.shadow_graph().rows().to_vec())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Independent,
    Clique,
}

fn count_sets(rows: &[u64], cand: u64, t: usize, mode: Mode) -> u64 {
    match t {
        0 => return 1,
        1 => return cand.count_ones() as u64,
        _ => {}
    }
    let mut total = 0;
    let mut rest = cand;
    while rest.count_ones() as usize >= t {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let next = match mode {
            Mode::Independent => rest & !rows[v],
            Mode::Clique => rest & rows[v],
        };
        if next.count_ones() as usize >= t - 1 {
            total += count_sets(rows, next, t - 1, mode);
        }
    }
    total
}

/// `i_t`: number of independent `t`-sets. Zero when `t > N`.
pub fn count_independent_sets<S: PairwiseStructure + ?Sized>(s: &S, t: usize) -> u64 {
    let rows = s.shadow_rows();
    count_sets(&rows, VertexSet::prefix(s.vertex_count()).bits(), t, Mode::Independent)
}

/// Independent `t`-sets of `g` lying inside `within`.
pub fn count_independent_sets_within(g: &Graph, within: VertexSet, t: usize) -> u64 {
    count_sets(g.rows(), within.intersection(g.vertices()).bits(), t, Mode::Independent)
}

/// `k_t`: number of `t`-cliques.
pub fn count_cliques(g: &Graph, t: usize) -> u64 {
    count_sets(g.rows(), g.vertices().bits(), t, Mode::Clique)
}

/// All `t`-cliques of `g` contained in `within`, in lexicographic order.
pub fn cliques_within(g: &Graph, within: VertexSet, t: usize) -> Vec<VertexSet> {
    fn go(rows: &[u64], cand: u64, t: usize, acc: u64, out: &mut Vec<VertexSet>) {
        if t == 0 {
            out.push(VertexSet::from_bits(acc));
            return;
        }
        let mut rest = cand;
        while rest.count_ones() as usize >= t {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            go(rows, rest & rows[v], t - 1, acc | 1u64 << v, out);
        }
    }
    let mut out = Vec::new();
    go(g.rows(), within.intersection(g.vertices()).bits(), t, 0, &mut out);
    out
}

/// `true` iff `g` has a `t`-clique containing `v`.
pub fn has_clique_through(g: &Graph, v: usize, t: usize) -> bool {
    fn exists(rows: &[u64], cand: u64, t: usize) -> bool {
        if t == 0 {
            return true;
        }
        let mut rest = cand;
        while rest.count_ones() as usize >= t {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if exists(rows, rest & rows[u], t - 1) {
                return true;
            }
        }
        false
    }
    t == 0 || exists(g.rows(), g.neighbors(v).bits(), t - 1)
}

/// Counts of vertex triples by how many edges they induce.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TripleCensus {
    pub tau0: u64,
    pub tau1: u64,
    pub tau2: u64,
    pub tau3: u64,
}

impl TripleCensus {
    pub fn total(&self) -> u64 {
        self.tau0 + self.tau1 + self.tau2 + self.tau3
    }

    /// `τ1 + τ2`.
    pub fn mixed(&self) -> u64 {
        self.tau1 + self.tau2
    }
}

pub fn triple_census(g: &Graph) -> TripleCensus {
    let n = g.vertex_count();
    let mut c = TripleCensus::default();
    for u in 0..n {
        for v in u + 1..n {
            let uv = g.has_edge(u, v) as usize;
            for w in v + 1..n {
                match uv + g.has_edge(u, w) as usize + g.has_edge(v, w) as usize {
                    0 => c.tau0 += 1,
                    1 => c.tau1 += 1,
                    2 => c.tau2 += 1,
                    _ => c.tau3 += 1,
                }
            }
        }
    }
    c
}

/// `½ Σ_v d(v)(N − 1 − d(v))`: each triple inducing one or two edges has
/// exactly two vertices adjacent to one other member and not the third.
pub fn degree_mixed_count(g: &Graph) -> u64 {
    let n = g.vertex_count() as u64;
    let twice: u64 = g
        .degrees()
        .into_iter()
        .map(|d| d as u64 * (n - 1 - d as u64))
        .sum();
    twice / 2
}

/// Exact `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) * (n - i) / (i + 1) stays integral at every step
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` when it fits in a `u64`.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    binomial(n, k).to_u64()
}

/// `C(n, k)` for the small arguments used in bounds; panics if it overflows.
pub(crate) fn choose(n: usize, k: usize) -> u64 {
    binomial_u64(n as u64, k as u64).expect("binomial coefficient exceeds u64")
}

/// `C(n, k)` for a possibly negative `n`, taken as zero.
pub(crate) fn choose_signed(n: i64, k: usize) -> u64 {
    if n < 0 {
        0
    } else {
        choose(n as usize, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    /// Oracle: test every t-subset against the hyperedge definition
    /// `|I ∩ e| <= 1` directly.
    fn brute_independent(h: &Hypergraph, t: usize) -> u64 {
        (0..h.vertex_count())
            .combinations(t)
            .filter(|c| {
                let s: VertexSet = c.iter().copied().collect();
                h.edges().iter().all(|e| e.intersection(s).len() <= 1)
            })
            .count() as u64
    }

    fn brute_cliques(g: &Graph, t: usize) -> u64 {
        (0..g.vertex_count())
            .combinations(t)
            .filter(|c| c.iter().tuple_combinations().all(|(&a, &b)| g.has_edge(a, b)))
            .count() as u64
    }

    /// Oracle: Pascal's rule on a full table.
    fn pascal(n: usize, k: usize) -> BigUint {
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row.get(k).cloned().unwrap_or(BigUint::ZERO)
    }

    fn split(n: usize, k: usize) -> Graph {
        let mut g = Graph::empty(n).unwrap();
        for u in 0..k {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn independent_set_examples() {
        for n in 0..8 {
            let e = Hypergraph::empty(n).unwrap();
            for t in 0..=n + 1 {
                assert_eq!(count_independent_sets(&e, t), choose(n, t));
            }
        }
        let matching = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        assert_eq!(count_independent_sets(&matching, 3), 8);
        // S_{6,2}: brute force over all 20 triples gives 4.
        let s62 = split(6, 2);
        assert_eq!(brute_independent(&Hypergraph::from_graph(&s62), 3), 4);
        assert_eq!(count_independent_sets(&s62, 3), 4);
    }

    #[test]
    fn clique_examples() {
        assert_eq!(count_cliques(&Graph::complete(4).unwrap(), 3), 4);
        let cl = Graph::from_edges(7, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)]).unwrap();
        assert_eq!(count_cliques(&cl, 3), 3);
        assert_eq!(count_cliques(&Graph::empty(5).unwrap(), 2), 0);
        assert_eq!(cliques_within(&cl, cl.vertices(), 3).len(), 3);
        assert!(has_clique_through(&cl, 3, 3));
        assert!(!has_clique_through(&Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap(), 1, 3));
    }

    #[test]
    fn census_examples() {
        let c5 = Graph::from_edges(5, (0..5).map(|v| (v, (v + 1) % 5))).unwrap();
        let c = triple_census(&c5);
        assert_eq!(c, TripleCensus { tau0: 0, tau1: 5, tau2: 5, tau3: 0 });
        assert_eq!(degree_mixed_count(&c5), 10);
        assert_eq!(triple_census(&Graph::empty(5).unwrap()), TripleCensus { tau0: 10, ..Default::default() });
        assert_eq!(triple_census(&Graph::complete(5).unwrap()), TripleCensus { tau3: 10, ..Default::default() });
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 3), 4u32.into());
        assert_eq!(binomial(2, 3), BigUint::ZERO);
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(56, 8), pascal(56, 8));
        assert_eq!(binomial(56, 8), 1_420_494_075u64.into());
        assert_eq!(binomial(200, 100), pascal(200, 100));
        assert_eq!(binomial_u64(64, 32), Some(1_832_624_140_942_590_534));
        assert_eq!(binomial_u64(70, 35), None);
    }

    fn arb_hypergraph(max_n: usize) -> impl Strategy<Value = Hypergraph> {
        (1..=max_n).prop_flat_map(|n| {
            prop::collection::vec(1u64..(1u64 << n), 0..8)
                .prop_map(move |bits| Hypergraph::new(n, bits.into_iter().map(VertexSet::from_bits)).unwrap())
        })
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            prop::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
                let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(p, _)| p)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn independent_count_matches_brute_force(h in arb_hypergraph(12), t in 0usize..6) {
            prop_assert_eq!(count_independent_sets(&h, t), brute_independent(&h, t));
        }

        #[test]
        fn hypergraph_and_shadow_agree(h in arb_hypergraph(10), t in 2usize..6) {
            prop_assert_eq!(count_independent_sets(&h, t), count_independent_sets(&h.shadow_graph(), t));
        }

        #[test]
        fn clique_count_matches_brute_force(g in arb_graph(10), t in 0usize..6) {
            prop_assert_eq!(count_cliques(&g, t), brute_cliques(&g, t));
        }

        #[test]
        fn census_identities(g in arb_graph(12)) {
            let n = g.vertex_count();
            let c = triple_census(&g);
            prop_assert_eq!(c.total(), choose(n, 3));
            prop_assert_eq!(c.tau0, count_independent_sets(&g, 3));
            prop_assert_eq!(c.tau3, count_cliques(&g, 3));
            prop_assert_eq!(c.mixed(), degree_mixed_count(&g));
            prop_assert_eq!(count_independent_sets(&g, 3), choose(n, 3) - c.tau1 - c.tau2 - count_cliques(&g, 3));
        }

        #[test]
        fn binomial_matches_pascal(n in 0usize..90, k in 0usize..95) {
            prop_assert_eq!(binomial(n as u64, k as u64), pascal(n, k));
        }
    }
}
