//! Edge switching on hypergraphs.
//!
//! Given a pivot edge `e0 = (v_1, ..., v_n)` with a fixed vertex order, every
//! other edge `e_i` meeting `e0` in `n_i` vertices is replaced by
//! `{v_1, ..., v_{n_i}} ∪ (e_i − e0)`. Replacements that coincide are merged.
//! The switch never lowers `i_3` and never raises the degree product `f`.

use serde::Serialize;

use crate::counting::{cliques_within, count_independent_sets};
use crate::error::{Error, Result, MAX_VERTICES};
use crate::hypergraph::{Hypergraph, OrderedEdge, PotentialValue};
use crate::iso::canonical_key_with_limit;
use crate::set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwitchOutcome {
    pub result: Hypergraph,
    pub f_before: PotentialValue,
    pub f_after: PotentialValue,
    /// `None` when the switch ran with `i_3` tracking disabled.
    pub i3_before: Option<u64>,
    pub i3_after: Option<u64>,
    pub merged_duplicates: usize,
    /// The result is not isomorphic to the input.
    pub changed: bool,
}

/// Switches with `i_3` tracking on.
pub fn edge_switch(h: &Hypergraph, e0: &OrderedEdge) -> Result<SwitchOutcome> {
    edge_switch_with(h, e0, true)
}

pub fn edge_switch_with(h: &Hypergraph, e0: &OrderedEdge, track_i3: bool) -> Result<SwitchOutcome> {
    let pivot = e0.as_set();
    if !h.contains_edge(pivot) {
        return Err(Error::NotAnEdge(pivot.to_string()));
    }
    let (result, merged_duplicates) = apply_switch(h, e0);
    let changed = !isomorphic(h, &result)?;
    let (i3_before, i3_after) = if track_i3 {
        (Some(count_independent_sets(h, 3)), Some(count_independent_sets(&result, 3)))
    } else {
        (None, None)
    };
    Ok(SwitchOutcome {
        f_before: h.potential(),
        f_after: result.potential(),
        result,
        i3_before,
        i3_after,
        merged_duplicates,
        changed,
    })
}

fn apply_switch(h: &Hypergraph, e0: &OrderedEdge) -> (Hypergraph, usize) {
    let pivot = e0.as_set();
    let edges = h
        .edges()
        .iter()
        .map(|&e| {
            let overlap = e.intersection(pivot).len();
            if e == pivot || overlap == 0 {
                e
            } else {
                e0.prefix(overlap).union(e.difference(pivot))
            }
        })
        .collect();
    Hypergraph::rebuilt(h.vertex_count(), edges)
}

fn isomorphic(a: &Hypergraph, b: &Hypergraph) -> Result<bool> {
    if a == b {
        return Ok(true);
    }
    if a.edge_count() != b.edge_count() || a.potential() != b.potential() {
        return Ok(false);
    }
    Ok(canonical_key_with_limit(a, MAX_VERTICES)? == canonical_key_with_limit(b, MAX_VERTICES)?)
}

/// Vertices of `e` by nonincreasing 1-degree in `h`, ties by smaller id.
pub fn default_ordering(h: &Hypergraph, e: VertexSet) -> Result<OrderedEdge> {
    if !h.contains_edge(e) {
        return Err(Error::NotAnEdge(e.to_string()));
    }
    let degrees = h.degrees();
    let mut vs = e.to_vec();
    vs.sort_by_key(|&v| (std::cmp::Reverse(degrees[v]), v));
    OrderedEdge::new(h, vs)
}

/// Degree product over vertices that lie in some edge. Equals `f` when no
/// vertex is isolated; switching preserves the isolated set, so this is the
/// quantity that strictly drops on every nontrivial switch.
pub fn covered_potential(h: &Hypergraph) -> PotentialValue {
    PotentialValue::product(h.degrees().into_iter().filter(|&d| d > 0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilization {
    pub result: Hypergraph,
    /// Number of switches that changed the isomorphism class.
    pub steps: usize,
    /// `covered_potential` of the start and after each changing step.
    pub f_trace: Vec<PotentialValue>,
}

/// Switches with the default ordering, scanning edges in sorted order and
/// restarting after every change, until a full scan changes nothing.
///
/// Fails only if a changing step does not lower the potential, which would
/// contradict the switching lemma and void the termination argument.
pub fn stabilize(h: &Hypergraph) -> Result<Stabilization> {
    let mut cur = h.clone();
    let mut f_trace = vec![covered_potential(&cur)];
    let mut steps = 0;
    'scan: loop {
        for &e in cur.edges() {
            let order = default_ordering(&cur, e)?;
            let (next, _) = apply_switch(&cur, &order);
            if isomorphic(&cur, &next)? {
                continue;
            }
            let f = covered_potential(&next);
            if f >= *f_trace.last().expect("trace starts nonempty") {
                return Err(Error::Precondition(format!(
                    "switch on {e} changed {cur:?} without lowering the potential"
                )));
            }
            f_trace.push(f);
            cur = next;
            steps += 1;
            continue 'scan;
        }
        return Ok(Stabilization {
            result: cur,
            steps,
            f_trace,
        });
    }
}

/// Every default-ordered switch returns an isomorphic hypergraph.
pub fn is_stable(h: &Hypergraph) -> Result<bool> {
    for &e in h.edges() {
        let (next, _) = apply_switch(h, &default_ordering(h, e)?);
        if !isomorphic(h, &next)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Independent 3-sets of both sides split by position relative to the pivot
/// `e0` and the closed region `S` (pivot plus adjacent edges):
/// `T1` misses `e0`; `T2`, `T3`, `T4` meet `e0` once and `S̄` in 2, 1, 0
/// vertices respectively.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionAudit {
    pub t_counts: [u64; 4],
    pub t_prime_counts: [u64; 4],
    /// `T1..T3` equal and `T4 <= T4'`.
    pub per_class_ok: [bool; 4],
    /// `Ti <= Ti'` for every class.
    pub per_class_monotone: [bool; 4],
    pub i3_before: u64,
    pub i3_after: u64,
    /// Each side's classes sum to its `i_3`.
    pub sums_ok: bool,
}

impl PartitionAudit {
    pub fn holds(&self) -> bool {
        self.sums_ok && self.per_class_ok.iter().all(|&ok| ok)
    }

    /// The weaker statement that suffices for `i_3` monotonicity.
    pub fn monotone(&self) -> bool {
        self.sums_ok && self.per_class_monotone.iter().all(|&ok| ok)
    }
}

pub fn partition_audit(h: &Hypergraph, e0: &OrderedEdge) -> Result<PartitionAudit> {
    let pivot = e0.as_set();
    if !h.contains_edge(pivot) {
        return Err(Error::NotAnEdge(pivot.to_string()));
    }
    let (after, _) = apply_switch(h, e0);
    let region = h
        .edges()
        .iter()
        .filter(|e| e.intersects(pivot))
        .fold(VertexSet::EMPTY, |acc, &e| acc.union(e));
    let outside = h.vertices().difference(region);
    let t_counts = classify(h, pivot, outside);
    let t_prime_counts = classify(&after, pivot, outside);
    let i3_before = count_independent_sets(h, 3);
    let i3_after = count_independent_sets(&after, 3);
    let per_class_ok = [
        t_counts[0] == t_prime_counts[0],
        t_counts[1] == t_prime_counts[1],
        t_counts[2] == t_prime_counts[2],
        t_counts[3] <= t_prime_counts[3],
    ];
    Ok(PartitionAudit {
        per_class_monotone: std::array::from_fn(|i| t_counts[i] <= t_prime_counts[i]),
        t_counts,
        t_prime_counts,
        per_class_ok,
        i3_before,
        i3_after,
        sums_ok: t_counts.iter().sum::<u64>() == i3_before
            && t_prime_counts.iter().sum::<u64>() == i3_after,
    })
}

fn classify(h: &Hypergraph, pivot: VertexSet, outside: VertexSet) -> [u64; 4] {
    let complement = h.shadow_graph().complement();
    let mut counts = [0u64; 4];
    for set in cliques_within(&complement, complement.vertices(), 3) {
        let class = match (set.intersection(pivot).len(), set.intersection(outside).len()) {
            (0, _) => 0,
            (_, 2) => 1,
            (_, 1) => 2,
            _ => 3,
        };
        counts[class] += 1;
    }
    counts
}

/// The unit-transfer certificate that the degree product over the pivot
/// does not grow. Steps are 1-based `(m, s)` index pairs with `m < s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MajorizationWitness {
    pub before: Vec<usize>,
    pub after: Vec<usize>,
    pub steps: Vec<(usize, usize)>,
    /// Product of the working sequence before any step and after each step.
    pub products: Vec<PotentialValue>,
}

/// Runs the transfer process from `before` toward `after`: take the first
/// index `m` with nonzero difference and the first index `s` with negative
/// difference, and move one unit from `s` to `m`.
pub fn majorization_witness(before: &[usize], after: &[usize]) -> Result<MajorizationWitness> {
    if before.len() != after.len() {
        return Err(Error::Majorization(format!(
            "sequences differ in length: {} vs {}",
            before.len(),
            after.len()
        )));
    }
    if before.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Majorization(format!("{before:?} is not nonincreasing")));
    }
    let alpha: Vec<i64> = after
        .iter()
        .zip(before)
        .map(|(&a, &b)| a as i64 - b as i64)
        .collect();
    let mut prefix = 0;
    for (j, a) in alpha.iter().enumerate() {
        prefix += a;
        if prefix < 0 {
            return Err(Error::Majorization(format!(
                "prefix sum of after − before is negative at position {}",
                j + 1
            )));
        }
    }
    if prefix != 0 {
        return Err(Error::Majorization(format!(
            "sums differ: {} vs {}",
            before.iter().sum::<usize>(),
            after.iter().sum::<usize>()
        )));
    }

    let mut y: Vec<i64> = before.iter().map(|&b| b as i64).collect();
    let target: Vec<i64> = after.iter().map(|&a| a as i64).collect();
    let product = |y: &[i64]| PotentialValue::product(y.iter().map(|&v| v as usize));
    let mut steps = Vec::new();
    let mut products = vec![product(&y)];
    while let Some(m) = (0..y.len()).find(|&i| y[i] != target[i]) {
        let s = (0..y.len())
            .find(|&i| y[i] > target[i])
            .expect("a nonzero difference with zero total has a negative entry");
        y[m] += 1;
        y[s] -= 1;
        steps.push((m + 1, s + 1));
        products.push(product(&y));
    }
    Ok(MajorizationWitness {
        before: before.to_vec(),
        after: after.to_vec(),
        steps,
        products,
    })
}

/// The two sequences the witness compares for a concrete switch: the
/// pivot's 1-degrees in `h` sorted nonincreasingly, and the pivot's
/// 1-degrees after the switch in pivot order, counting coincident
/// replacement edges separately (merging only lowers them further).
pub fn switch_degree_sequences(h: &Hypergraph, e0: &OrderedEdge) -> Result<(Vec<usize>, Vec<usize>)> {
    let pivot = e0.as_set();
    if !h.contains_edge(pivot) {
        return Err(Error::NotAnEdge(pivot.to_string()));
    }
    let degrees = h.degrees();
    let mut before: Vec<usize> = pivot.iter().map(|v| degrees[v]).collect();
    before.sort_unstable_by(|a, b| b.cmp(a));
    let overlaps: Vec<usize> = h
        .edges()
        .iter()
        .filter(|&&e| e != pivot)
        .map(|e| e.intersection(pivot).len())
        .filter(|&k| k > 0)
        .collect();
    let after = (1..=e0.len())
        .map(|i| 1 + overlaps.iter().filter(|&&k| k >= i).count())
        .collect();
    Ok((before, after))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::are_isomorphic;
    use proptest::prelude::*;

    fn hg(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::from_lists(n, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    fn ordered(h: &Hypergraph, vs: &[usize]) -> OrderedEdge {
        OrderedEdge::new(h, vs.to_vec()).unwrap()
    }

    /// The three-edge example, shifted to vertices 0..6.
    fn triangle_of_edges() -> Hypergraph {
        hg(6, &[&[0, 1, 2], &[1, 3, 4], &[2, 3, 5]])
    }

    #[test]
    fn switch_example() {
        let h = triangle_of_edges();
        let out = edge_switch(&h, &ordered(&h, &[0, 1, 2])).unwrap();
        assert_eq!(out.result.edge_lists(), vec![vec![0, 1, 2], vec![0, 3, 4], vec![0, 3, 5]]);
        assert_eq!(out.f_before, PotentialValue::from(8));
        assert_eq!(out.f_after, PotentialValue::from(6));
        assert_eq!((out.i3_before, out.i3_after), (Some(1), Some(2)));
        assert!(out.changed);
        assert_eq!(out.merged_duplicates, 0);
    }

    #[test]
    fn switch_without_neighbors_is_identity() {
        let h = hg(3, &[&[0, 1, 2]]);
        let out = edge_switch(&h, &ordered(&h, &[0, 1, 2])).unwrap();
        assert_eq!(out.result, h);
        assert!(!out.changed);
        assert_eq!(out.f_before, out.f_after);
        assert_eq!(out.i3_before, out.i3_after);
    }

    #[test]
    fn switch_merges_collisions() {
        let h = hg(6, &[&[0, 1, 2, 3], &[2, 3, 4, 5], &[0, 1, 4, 5]]);
        let out = edge_switch(&h, &ordered(&h, &[0, 1, 2, 3])).unwrap();
        assert_eq!(out.merged_duplicates, 1);
        assert_eq!(out.result.edge_lists(), vec![vec![0, 1, 2, 3], vec![0, 1, 4, 5]]);
        assert!(out.f_after < out.f_before);
        assert!(out.changed);
    }

    #[test]
    fn switch_rejects_non_edges() {
        let h = triangle_of_edges();
        let h2 = hg(6, &[&[0, 1, 3]]);
        let bad = OrderedEdge::new(&h2, vec![0, 1, 3]).unwrap();
        assert!(matches!(edge_switch(&h, &bad), Err(Error::NotAnEdge(_))));
    }

    #[test]
    fn untracked_switch_skips_i3() {
        let h = triangle_of_edges();
        let out = edge_switch_with(&h, &ordered(&h, &[0, 1, 2]), false).unwrap();
        assert_eq!(out.i3_before, None);
        assert_eq!(out.f_after, PotentialValue::from(6));
    }

    #[test]
    fn default_ordering_examples() {
        let h = triangle_of_edges();
        let e = VertexSet::from_iter([0, 1, 2]);
        assert_eq!(default_ordering(&h, e).unwrap().vertices(), &[1, 2, 0]);
        let h = hg(3, &[&[0, 1, 2]]);
        assert_eq!(default_ordering(&h, h.edges()[0]).unwrap().vertices(), &[0, 1, 2]);
        let h = hg(3, &[&[0, 1], &[1, 2]]);
        let e = VertexSet::from_iter([1, 2]);
        assert_eq!(default_ordering(&h, e).unwrap().vertices(), &[1, 2]);
        assert!(default_ordering(&h, VertexSet::from_iter([0, 2])).is_err());
    }

    #[test]
    fn stabilize_examples() {
        let h = hg(5, &[&[0, 1, 2], &[2, 3, 4]]);
        let st = stabilize(&h).unwrap();
        assert_eq!(st.steps, 0);
        assert_eq!(st.result, h);

        let h = triangle_of_edges();
        let st = stabilize(&h).unwrap();
        assert!(st.steps >= 1);
        assert!(st.f_trace.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(st.f_trace.len(), st.steps + 1);
        assert!(is_stable(&st.result).unwrap());
    }

    #[test]
    fn split_clique_hypergraph_is_stable() {
        use crate::covering::{associated_hypergraph, make_split};
        for (big_n, n) in [(7, 3), (8, 3), (6, 4), (9, 2)] {
            let h = associated_hypergraph(&make_split(big_n, n - 1).unwrap(), n);
            assert!(is_stable(&h).unwrap());
            assert_eq!(stabilize(&h).unwrap().steps, 0);
        }
    }

    #[test]
    fn stability_examples() {
        assert!(is_stable(&hg(3, &[&[0, 1, 2]])).unwrap());
        assert!(!is_stable(&triangle_of_edges()).unwrap());
        assert!(is_stable(&Hypergraph::empty(4).unwrap()).unwrap());
    }

    #[test]
    fn partition_audit_examples() {
        let h = hg(3, &[&[0, 1, 2]]);
        let a = partition_audit(&h, &ordered(&h, &[0, 1, 2])).unwrap();
        assert_eq!(a.t_counts, a.t_prime_counts);
        assert!(a.holds());

        let h = triangle_of_edges();
        let a = partition_audit(&h, &ordered(&h, &[0, 1, 2])).unwrap();
        assert!(a.holds(), "{a:?}");
        assert_eq!(a.t_counts, [0, 0, 0, 1]);
        assert_eq!(a.t_prime_counts, [0, 0, 0, 2]);
        assert_eq!((a.i3_before, a.i3_after), (1, 2));

        let h = hg(6, &[&[0, 1, 2], &[2, 3, 4]]);
        let a = partition_audit(&h, &ordered(&h, &[0, 1, 2])).unwrap();
        assert_eq!(a.t_counts[1], 0);
        assert_eq!(a.t_prime_counts[1], 0);
        assert!(a.holds());
    }

    #[test]
    fn equal_i3_without_isomorphism() {
        // a 4-cycle plus a disjoint edge; switching at 01 gives a triangle
        // with a pendant vertex, and both sides have four independent triples
        let h = hg(6, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3], &[4, 5]]);
        let out = edge_switch(&h, &ordered(&h, &[0, 1])).unwrap();
        assert_eq!(out.result.edge_lists(), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![2, 3], vec![4, 5]]);
        assert_eq!((out.i3_before, out.i3_after), (Some(4), Some(4)));
        assert_eq!(out.f_before, PotentialValue::from(16));
        assert_eq!(out.f_after, PotentialValue::from(12));
        assert!(out.changed);
    }

    #[test]
    fn third_class_can_grow() {
        // a vertex outside e0 lying in two adjacent edges sees fewer pivot
        // vertices before the switch than after
        let h = hg(8, &[&[0, 3, 6, 7], &[0, 5], &[1, 3, 4, 7], &[1, 6, 7], &[2, 3]]);
        let a = partition_audit(&h, &ordered(&h, &[4, 3, 1, 7])).unwrap();
        assert_eq!(a.t_counts[2], 4);
        assert_eq!(a.t_prime_counts[2], 5);
        assert!(!a.holds());
        assert!(a.monotone());
    }

    #[test]
    fn witness_examples() {
        let w = majorization_witness(&[2, 2, 1], &[3, 1, 1]).unwrap();
        assert_eq!(w.steps, vec![(1, 2)]);
        assert_eq!(w.products, vec![PotentialValue::from(4), PotentialValue::from(3)]);

        let w = majorization_witness(&[3, 2, 2], &[3, 2, 2]).unwrap();
        assert!(w.steps.is_empty());
        assert_eq!(w.products.len(), 1);

        assert!(matches!(
            majorization_witness(&[3, 1, 1], &[1, 3, 1]),
            Err(Error::Majorization(_))
        ));
        assert!(majorization_witness(&[1, 2], &[2, 1]).is_err());
        assert!(majorization_witness(&[2, 1], &[2, 2]).is_err());
    }

    #[test]
    fn switch_sequences_match_example() {
        let h = triangle_of_edges();
        let (before, after) = switch_degree_sequences(&h, &ordered(&h, &[0, 1, 2])).unwrap();
        assert_eq!(before, vec![2, 2, 1]);
        assert_eq!(after, vec![3, 1, 1]);
    }

    pub(crate) fn arb_covering_hypergraph() -> impl Strategy<Value = Hypergraph> {
        (2usize..=8).prop_flat_map(|n| {
            prop::collection::vec(1u64..(1u64 << n), 1..7).prop_map(move |bits| {
                let mut edges: Vec<VertexSet> = bits.into_iter().map(VertexSet::from_bits).collect();
                let covered = edges.iter().fold(VertexSet::EMPTY, |a, &e| a.union(e));
                for v in VertexSet::prefix(n).difference(covered) {
                    edges.push(VertexSet::singleton(v).union(VertexSet::singleton((v + 1) % n)));
                }
                Hypergraph::new(n, edges).unwrap()
            })
        })
    }

    fn arb_switch() -> impl Strategy<Value = (Hypergraph, OrderedEdge)> {
        arb_covering_hypergraph().prop_flat_map(|h| {
            let m = h.edge_count();
            (Just(h), 0..m, any::<u64>()).prop_map(|(h, i, seed)| {
                let mut vs = h.edges()[i].to_vec();
                let len = vs.len();
                let mut state = seed;
                for j in (1..len).rev() {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    vs.swap(j, (state >> 33) as usize % (j + 1));
                }
                let e = OrderedEdge::new(&h, vs).unwrap();
                (h, e)
            })
        })
    }

    proptest! {
        #[test]
        fn switching_is_monotone((h, e0) in arb_switch()) {
            let out = edge_switch(&h, &e0).unwrap();
            prop_assert!(out.i3_after >= out.i3_before);
            prop_assert!(out.f_after <= out.f_before);
            prop_assert_eq!(out.f_after == out.f_before, !out.changed);
            prop_assert_eq!(out.changed, !are_isomorphic(&h, &out.result).unwrap());
            prop_assert_eq!(out.result.vertex_count(), h.vertex_count());
            prop_assert_eq!(out.result.is_connected(), h.is_connected());
        }

        #[test]
        fn switching_preserves_the_closed_region((h, e0) in arb_switch()) {
            let pivot = e0.as_set();
            let region = |x: &Hypergraph| x.edges().iter().filter(|e| e.intersects(pivot)).fold(VertexSet::EMPTY, |a, &e| a.union(e));
            let out = edge_switch_with(&h, &e0, false).unwrap();
            prop_assert_eq!(region(&h), region(&out.result));
        }

        #[test]
        fn partition_audit_is_monotone((h, e0) in arb_switch()) {
            let a = partition_audit(&h, &e0).unwrap();
            prop_assert!(a.monotone());
            prop_assert!(a.per_class_ok[0] && a.per_class_ok[1]);
        }

        #[test]
        fn witness_certifies_the_switch((h, e0) in arb_switch()) {
            let (before, after) = switch_degree_sequences(&h, &e0).unwrap();
            let w = majorization_witness(&before, &after).unwrap();
            prop_assert!(w.products.windows(2).all(|p| p[1] < p[0]));
            prop_assert_eq!(w.steps.is_empty(), before == after);
            prop_assert!(w.steps.iter().all(|&(m, s)| m < s));
            let out = edge_switch_with(&h, &e0, false).unwrap();
            let pivot_product = |x: &Hypergraph| {
                let d = x.degrees();
                PotentialValue::product(e0.vertices().iter().map(|&v| d[v]))
            };
            prop_assert!(pivot_product(&out.result) <= *w.products.last().unwrap());
            prop_assert_eq!(pivot_product(&h), w.products[0].clone());
        }

        #[test]
        fn stabilize_ends_stable(h in arb_covering_hypergraph()) {
            let st = stabilize(&h).unwrap();
            prop_assert!(is_stable(&st.result).unwrap());
            prop_assert!(st.f_trace.windows(2).all(|w| w[1] < w[0]));
            if st.result.is_connected() && st.result.edge_count() > 0 {
                prop_assert_eq!(st.result.max_degree(), Some(st.result.edge_count()));
            }
        }
    }
}
