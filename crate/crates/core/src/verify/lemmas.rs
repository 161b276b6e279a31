use itertools::Itertools;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use super::random::{instance_rng, random_connected_hypergraph, random_hypergraph, random_ordering};
use super::{to_value, FailureLog, VerifyReport};
use crate::counting::count_independent_sets;
use crate::hypergraph::{Hypergraph, OrderedEdge};
use crate::par::Exec;
use crate::switching::{
    default_ordering, edge_switch, majorization_witness, partition_audit, stabilize,
    switch_degree_sequences,
};

/// Shape of the random instances drawn by a suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_edge_size: usize,
}

impl SuiteLimits {
    /// Instances for the switching suites: up to 9 vertices and 7 edges.
    pub const SWITCHING: SuiteLimits = SuiteLimits {
        max_vertices: 9,
        max_edges: 7,
        max_edge_size: 5,
    };
    /// Instances for the stable-lemma suite: up to 8 vertices and 6 edges.
    pub const STABLE: SuiteLimits = SuiteLimits {
        max_vertices: 8,
        max_edges: 6,
        max_edge_size: 4,
    };
}

/// Pivot orderings tried per edge: every permutation up to this size,
/// otherwise the default ordering plus a few random ones.
const FULL_PERMUTATION_SIZE: usize = 4;
const RANDOM_ORDERINGS: usize = 3;

fn orderings<R: Rng>(rng: &mut R, h: &Hypergraph) -> Vec<OrderedEdge> {
    let mut out = Vec::new();
    for &e in h.edges() {
        if e.len() <= FULL_PERMUTATION_SIZE {
            for p in e.iter().permutations(e.len()) {
                out.push(OrderedEdge::new(h, p).expect("permutation of an edge"));
            }
        } else {
            out.push(default_ordering(h, e).expect("edge of h"));
            for _ in 0..RANDOM_ORDERINGS {
                out.push(random_ordering(rng, h, e));
            }
        }
    }
    out
}

/// Each check of the switching lemma, tallied separately.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SwitchingChecks {
    pub i3_decreased: FailureLog,
    pub f_increased: FailureLog,
    /// `f` unchanged but the result is not isomorphic.
    pub f_equal_not_isomorphic: FailureLog,
    /// Isomorphic result with a different `f`.
    pub isomorphic_f_differs: FailureLog,
    /// Isomorphic result with a different `i_3`.
    pub isomorphic_i3_differs: FailureLog,
    /// `i_3` unchanged but the result is not isomorphic; the equality case
    /// of the lemma asserts this never happens.
    pub i3_equal_not_isomorphic: FailureLog,
    /// The transfer witness could not be built or did not certify the drop.
    pub witness_failed: FailureLog,
    /// Stabilizing the instance failed, or its connected result has no
    /// vertex in every edge.
    pub stabilize_failed: FailureLog,
}

impl SwitchingChecks {
    fn merge(&mut self, o: SwitchingChecks) {
        self.i3_decreased.merge(o.i3_decreased);
        self.f_increased.merge(o.f_increased);
        self.f_equal_not_isomorphic.merge(o.f_equal_not_isomorphic);
        self.isomorphic_f_differs.merge(o.isomorphic_f_differs);
        self.isomorphic_i3_differs.merge(o.isomorphic_i3_differs);
        self.i3_equal_not_isomorphic.merge(o.i3_equal_not_isomorphic);
        self.witness_failed.merge(o.witness_failed);
        self.stabilize_failed.merge(o.stabilize_failed);
    }

    /// `i_3` never drops.
    pub fn i3_monotone(&self) -> bool {
        self.i3_decreased.is_empty()
    }

    /// `f` never grows, and the transfer witness certifies every switch.
    pub fn f_monotone(&self) -> bool {
        self.f_increased.is_empty() && self.witness_failed.is_empty()
    }

    /// `f` is unchanged exactly when the result is isomorphic.
    pub fn f_equality_iff_isomorphic(&self) -> bool {
        self.f_equal_not_isomorphic.is_empty() && self.isomorphic_f_differs.is_empty()
    }

    /// Isomorphic results keep `i_3`.
    pub fn i3_equality_if_isomorphic(&self) -> bool {
        self.isomorphic_i3_differs.is_empty()
    }

    /// Unchanged `i_3` forces an isomorphic result.
    pub fn i3_equality_only_if_isomorphic(&self) -> bool {
        self.i3_equal_not_isomorphic.is_empty()
    }

    pub fn all_hold(&self) -> bool {
        self.i3_monotone()
            && self.f_monotone()
            && self.f_equality_iff_isomorphic()
            && self.i3_equality_if_isomorphic()
            && self.i3_equality_only_if_isomorphic()
            && self.stabilize_failed.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwitchingSummary {
    pub samples: u64,
    pub seed: u64,
    pub limits: SuiteLimits,
    pub switches: u64,
    pub changed: u64,
    pub i3_strict: u64,
    pub merged_switches: u64,
    /// Switches that lowered `i_4`; recorded only, nothing is claimed.
    pub i4_decreased: u64,
    pub checks: SwitchingChecks,
    pub pass: bool,
}

#[derive(Default)]
struct SwitchTally {
    switches: u64,
    changed: u64,
    i3_strict: u64,
    merged: u64,
    i4_decreased: u64,
    checks: SwitchingChecks,
}

/// Draws `samples` hypergraphs and switches each at every edge under the
/// pivot orderings above, checking both monotonicity statements and their
/// equality cases against canonical isomorphism.
pub fn verify_switching(samples: u64, seed: u64, exec: &Exec) -> SwitchingSummary {
    let limits = SuiteLimits::SWITCHING;
    let indices: Vec<u64> = (0..samples).collect();
    let tallies = exec.map(&indices, |&i| {
        let mut rng = instance_rng(seed, i);
        let h = random_hypergraph(&mut rng, limits.max_vertices, limits.max_edges, limits.max_edge_size);
        switch_instance(&mut rng, i, &h)
    });
    let mut total = SwitchTally::default();
    for t in tallies {
        total.switches += t.switches;
        total.changed += t.changed;
        total.i3_strict += t.i3_strict;
        total.merged += t.merged;
        total.i4_decreased += t.i4_decreased;
        total.checks.merge(t.checks);
    }
    SwitchingSummary {
        samples,
        seed,
        limits,
        switches: total.switches,
        changed: total.changed,
        i3_strict: total.i3_strict,
        merged_switches: total.merged,
        i4_decreased: total.i4_decreased,
        pass: total.checks.all_hold(),
        checks: total.checks,
    }
}

fn switch_instance<R: Rng>(rng: &mut R, index: u64, h: &Hypergraph) -> SwitchTally {
    let mut tally = SwitchTally::default();
    let c = &mut tally.checks;
    let i4_before = count_independent_sets(h, 4);
    for e0 in orderings(rng, h) {
        let out = edge_switch(h, &e0).expect("pivot is an edge");
        let (i3b, i3a) = (out.i3_before.unwrap_or(0), out.i3_after.unwrap_or(0));
        let tag = || format!("instance {index}: {h:?} pivot {:?} -> {:?}", e0.vertices(), out.result);
        tally.switches += 1;
        tally.changed += out.changed as u64;
        tally.i3_strict += (i3a > i3b) as u64;
        tally.merged += (out.merged_duplicates > 0) as u64;
        tally.i4_decreased += (count_independent_sets(&out.result, 4) < i4_before) as u64;

        if i3a < i3b {
            c.i3_decreased.push(format!("{}: i3 {i3b} -> {i3a}", tag()));
        }
        if out.f_after > out.f_before {
            c.f_increased.push(format!("{}: f {} -> {}", tag(), out.f_before, out.f_after));
        }
        let f_equal = out.f_after == out.f_before;
        if f_equal && out.changed {
            c.f_equal_not_isomorphic.push(format!("{}: f {} kept", tag(), out.f_before));
        }
        if !f_equal && !out.changed {
            c.isomorphic_f_differs.push(tag());
        }
        if i3a != i3b && !out.changed {
            c.isomorphic_i3_differs.push(tag());
        }
        if i3a == i3b && out.changed {
            c.i3_equal_not_isomorphic.push(format!(
                "{}: i3 = {i3a} on both sides without isomorphism",
                tag()
            ));
        }
        match switch_degree_sequences(h, &e0).and_then(|(b, a)| majorization_witness(&b, &a)) {
            Ok(w) => {
                let d = out.result.degrees();
                let pivot_after = crate::hypergraph::PotentialValue::product(e0.vertices().iter().map(|&v| d[v]));
                let last = w.products.last().expect("witness has a start product");
                if pivot_after > *last || w.products.windows(2).any(|p| p[1] >= p[0]) {
                    c.witness_failed.push(format!("{}: witness {:?}", tag(), w.steps));
                }
            }
            Err(err) => c.witness_failed.push(format!("{}: {err}", tag())),
        }
    }
    if let Err(msg) = stabilize_check(h) {
        c.stabilize_failed.push(format!("instance {index}: {msg}"));
    }
    tally
}

/// Stabilizes `h` and checks the trace, stability, connectivity, and the
/// full-degree vertex of a connected result.
fn stabilize_check(h: &Hypergraph) -> Result<usize, String> {
    let st = stabilize(h).map_err(|e| e.to_string())?;
    if st.f_trace.windows(2).any(|w| w[1] >= w[0]) {
        return Err(format!("{h:?}: potential trace not strictly decreasing"));
    }
    if !crate::switching::is_stable(&st.result).map_err(|e| e.to_string())? {
        return Err(format!("{h:?}: end state {:?} is not stable", st.result));
    }
    if st.result.is_connected() != h.is_connected() {
        return Err(format!("{h:?}: stabilizing changed connectivity"));
    }
    if h.is_connected() && h.edge_count() > 0 && st.result.max_degree() != Some(st.result.edge_count()) {
        return Err(format!(
            "{h:?}: connected stable {:?} has no vertex in all {} edges",
            st.result,
            st.result.edge_count()
        ));
    }
    Ok(st.steps)
}

impl SwitchingSummary {
    pub fn report(&self, elapsed_ms: u64) -> VerifyReport {
        let params = json!({"samples": self.samples, "limits": self.limits});
        let mut r = VerifyReport::new("verify-switching", params, self.pass, self.samples, elapsed_ms);
        r.seed = Some(self.seed);
        let c = &self.checks;
        for (name, log) in [
            ("i3 decreased", &c.i3_decreased),
            ("f increased", &c.f_increased),
            ("f equal without isomorphism", &c.f_equal_not_isomorphic),
            ("isomorphic with different f", &c.isomorphic_f_differs),
            ("isomorphic with different i3", &c.isomorphic_i3_differs),
            ("i3 equal without isomorphism", &c.i3_equal_not_isomorphic),
            ("majorization witness", &c.witness_failed),
            ("stabilize", &c.stabilize_failed),
        ] {
            if let Some(first) = log.examples.first() {
                r.failures.push(format!("{name} ({} cases), e.g. {first}", log.count));
            }
        }
        r.details = to_value(self);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionSummary {
    pub samples: u64,
    pub seed: u64,
    /// Instances where each stated relation failed: `T1 = T1'`, `T2 = T2'`,
    /// `T3 = T3'`, `T4 <= T4'`.
    pub class_failures: [u64; 4],
    /// Instances where `Ti <= Ti'` failed, per class.
    pub monotone_failures: [u64; 4],
    pub sum_failures: u64,
    pub examples: FailureLog,
    /// The stated relations all hold on every instance.
    pub pass: bool,
    /// The weaker per-class inequalities hold on every instance.
    pub monotone: bool,
}

/// One random hypergraph, pivot edge, and pivot ordering per instance.
pub fn verify_partition(samples: u64, seed: u64, exec: &Exec) -> PartitionSummary {
    let limits = SuiteLimits::SWITCHING;
    let indices: Vec<u64> = (0..samples).collect();
    let audits = exec.map(&indices, |&i| {
        let mut rng = instance_rng(seed, i);
        let h = random_hypergraph(&mut rng, limits.max_vertices, limits.max_edges, limits.max_edge_size);
        let e = h.edges()[rng.gen_range(0..h.edge_count())];
        let e0 = random_ordering(&mut rng, &h, e);
        let audit = partition_audit(&h, &e0).expect("pivot is an edge");
        (i, h, e0, audit)
    });
    let mut class_failures = [0; 4];
    let mut monotone_failures = [0; 4];
    let mut sum_failures = 0;
    let mut examples = FailureLog::default();
    for (i, h, e0, a) in audits {
        for k in 0..4 {
            class_failures[k] += !a.per_class_ok[k] as u64;
            monotone_failures[k] += !a.per_class_monotone[k] as u64;
        }
        sum_failures += !a.sums_ok as u64;
        if !a.holds() {
            examples.push(format!(
                "instance {i}: {h:?} pivot {:?}: T = {:?}, T' = {:?}",
                e0.vertices(),
                a.t_counts,
                a.t_prime_counts
            ));
        }
    }
    PartitionSummary {
        samples,
        seed,
        pass: class_failures.iter().all(|&c| c == 0) && sum_failures == 0,
        monotone: monotone_failures.iter().all(|&c| c == 0) && sum_failures == 0,
        class_failures,
        monotone_failures,
        sum_failures,
        examples,
    }
}

impl PartitionSummary {
    pub fn report(&self, elapsed_ms: u64) -> VerifyReport {
        let mut r = VerifyReport::new("verify-partition", json!({"samples": self.samples}), self.pass, self.samples, elapsed_ms);
        r.seed = Some(self.seed);
        for (k, &c) in self.class_failures.iter().enumerate() {
            if c > 0 {
                let rel = if k == 3 { "<=" } else { "=" };
                r.failures.push(format!("T{0} {rel} T{0}' failed on {c} instances", k + 1));
            }
        }
        if self.sum_failures > 0 {
            r.failures.push(format!("class sums differ from i3 on {} instances", self.sum_failures));
        }
        r.details = to_value(self);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableSummary {
    pub samples: u64,
    pub seed: u64,
    pub limits: SuiteLimits,
    pub total_steps: u64,
    pub max_steps: u64,
    pub failures: FailureLog,
    pub pass: bool,
}

/// Stabilizes random connected hypergraphs and checks that each end state
/// is stable, connected, and has a vertex lying in every edge.
pub fn verify_stable_lemma(samples: u64, seed: u64, limits: SuiteLimits, exec: &Exec) -> StableSummary {
    let indices: Vec<u64> = (0..samples).collect();
    let results = exec.map(&indices, |&i| {
        let mut rng = instance_rng(seed, i);
        let h = random_connected_hypergraph(&mut rng, limits.max_vertices, limits.max_edges, limits.max_edge_size);
        stabilize_check(&h).map_err(|m| format!("instance {i}: {m}"))
    });
    let mut failures = FailureLog::default();
    let (mut total_steps, mut max_steps) = (0u64, 0u64);
    for r in results {
        match r {
            Ok(steps) => {
                total_steps += steps as u64;
                max_steps = max_steps.max(steps as u64);
            }
            Err(m) => failures.push(m),
        }
    }
    StableSummary {
        samples,
        seed,
        limits,
        total_steps,
        max_steps,
        pass: failures.is_empty(),
        failures,
    }
}

impl StableSummary {
    pub fn report(&self, elapsed_ms: u64) -> VerifyReport {
        let params = json!({"samples": self.samples, "limits": self.limits});
        let mut r = VerifyReport::new("verify-stable", params, self.pass, self.samples, elapsed_ms);
        r.seed = Some(self.seed);
        r.failures = self.failures.examples.clone();
        r.details = to_value(self);
        r
    }
}
