use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use super::random::{instance_rng, random_graph};
use super::{to_value, FailureLog, GraphCatalog, VerifyReport};
use crate::counting::{
    choose, count_cliques, count_independent_sets, degree_mixed_count, triple_census,
};
use crate::covering::{associated_hypergraph, induction_step_audit, is_edge_critical, is_kn_covered};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;
use crate::par::Exec;
use crate::switching::stabilize;

/// `r² − 3(n − 1)r + 3n² − 3n − 1`.
pub fn deficit_poly(n: i128, r: i128) -> i128 {
    r * r - 3 * (n - 1) * r + 3 * n * n - 3 * n - 1
}

/// `((n³ − n)(q − 1) + r·p(r)) / 6` with `p` = [`deficit_poly`], the lower
/// bound on `C(N − n + 1, 3) − i_3(G)` for disconnected `K_n`-covered `G` on
/// `N = qn + r` vertices.
pub fn deficit(n: u64, q: u64, r: u64) -> Result<Ratio<i128>> {
    if n < 3 || q < 2 || r >= n {
        return Err(Error::InvalidParameter(format!(
            "deficit needs n >= 3, q >= 2, 0 <= r <= n − 1; got n = {n}, q = {q}, r = {r}"
        )));
    }
    let (n, q, r) = (n as i128, q as i128, r as i128);
    Ok(Ratio::new((n * n * n - n) * (q - 1) + r * deficit_poly(n, r), 6))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisconnectedSummary {
    pub n_max: u64,
    pub q_max: u64,
    pub graph_order_max: usize,
    pub tuples_checked: u64,
    pub graphs_checked: u64,
    /// The polynomial is decreasing on `0..n`, ends at `n² + n − 3 > 0`,
    /// and the deficit is positive, for every tuple.
    pub closed_form_ok: bool,
    /// Every disconnected covered graph beats the bound by at least the
    /// deficit, hence strictly.
    pub graphs_ok: bool,
    /// The best disconnected class stays below the best connected class.
    pub maxima_ok: bool,
    pub failures: FailureLog,
    pub pass: bool,
}

/// Closed-form positivity over `3 <= n <= n_max`, `2 <= q <= q_max`,
/// `0 <= r < n`, plus a direct scan of the disconnected `K_n`-covered classes
/// with `n >= 3` and at most `graph_order_max` vertices.
pub fn verify_disconnected_bound(
    catalog: &GraphCatalog,
    n_max: u64,
    q_max: u64,
    graph_order_max: usize,
) -> Result<DisconnectedSummary> {
    let mut failures = FailureLog::default();
    let mut tuples_checked = 0;
    for n in 3..=n_max {
        let (ni, last) = (n as i128, n as i128 - 1);
        if deficit_poly(ni, last) != ni * ni + ni - 3 || ni * ni + ni - 3 <= 0 {
            failures.push(format!("p({last}) != n² + n − 3 for n = {n}"));
        }
        for r in 1..n as i128 {
            if deficit_poly(ni, r) >= deficit_poly(ni, r - 1) {
                failures.push(format!("p not decreasing at r = {r}, n = {n}"));
            }
        }
        for q in 2..=q_max {
            for r in 0..n {
                tuples_checked += 1;
                if deficit(n, q, r)? <= Ratio::from_integer(0) {
                    failures.push(format!("deficit({n}, {q}, {r}) <= 0"));
                }
            }
        }
    }
    let closed_form_ok = failures.is_empty();

    let mut graphs_checked = 0;
    let mut graphs_ok = true;
    let mut maxima_ok = true;
    for order in 0..=graph_order_max {
        let classes = catalog.classes(order)?;
        for n in 3..=order / 2 {
            let (q, r) = (order / n, order % n);
            let bound = choose(order + 1 - n, 3);
            let slack = deficit(n as u64, q as u64, r as u64)?;
            let (mut best_connected, mut best_disconnected) = (None::<u64>, None::<u64>);
            for g in classes.iter().filter(|g| is_kn_covered(g, n)) {
                let i3 = count_independent_sets(g, 3);
                if g.is_connected() {
                    best_connected = best_connected.max(Some(i3));
                    continue;
                }
                graphs_checked += 1;
                if Ratio::from_integer(bound as i128 - i3 as i128) < slack {
                    graphs_ok = false;
                    failures.push(format!("n = {n}: {g:?} has i3 = {i3}, bound {bound}, deficit {slack}"));
                }
            }
            for g in classes.iter().filter(|g| !g.is_connected() && is_kn_covered(g, n)) {
                best_disconnected = best_disconnected.max(Some(count_independent_sets(g, 3)));
            }
            if let (Some(d), Some(c)) = (best_disconnected, best_connected) {
                if d >= c {
                    maxima_ok = false;
                    failures.push(format!("N = {order}, n = {n}: disconnected max {d} >= connected max {c}"));
                }
            }
        }
    }
    Ok(DisconnectedSummary {
        n_max,
        q_max,
        graph_order_max,
        tuples_checked,
        graphs_checked,
        closed_form_ok,
        graphs_ok,
        maxima_ok,
        pass: closed_form_ok && graphs_ok && maxima_ok,
        failures,
    })
}

impl DisconnectedSummary {
    pub fn report(&self, elapsed_ms: u64) -> VerifyReport {
        let params = json!({"n_max": self.n_max, "q_max": self.q_max, "N_max": self.graph_order_max});
        let mut r = VerifyReport::new(
            "verify-disconnected",
            params,
            self.pass,
            self.tuples_checked + self.graphs_checked,
            elapsed_ms,
        );
        r.failures = self.failures.examples.clone();
        r.details = to_value(self);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub samples: u64,
    pub seed: u64,
    pub max_order: usize,
    pub failures: FailureLog,
    pub pass: bool,
}

/// On random graphs with at most `max_order` vertices: the census sums to
/// `C(N, 3)`, `τ0 = i_3`, `τ3 = k_3`, and `τ1 + τ2 = ½ Σ d(N − 1 − d)`.
pub fn verify_census(samples: u64, seed: u64, max_order: usize, exec: &Exec) -> CensusSummary {
    let indices: Vec<u64> = (0..samples).collect();
    let results = exec.map(&indices, |&i| {
        let mut rng = instance_rng(seed, i);
        let order = rng.gen_range(0..=max_order);
        let p = rng.gen_range(0.0..1.0);
        let g = random_graph(&mut rng, order, p);
        let c = triple_census(&g);
        let i3 = count_independent_sets(&g, 3);
        let k3 = count_cliques(&g, 3);
        let total = choose(order, 3);
        let ok = c.total() == total
            && c.tau0 == i3
            && c.tau3 == k3
            && i3 == total - c.tau1 - c.tau2 - k3
            && c.mixed() == degree_mixed_count(&g);
        (!ok).then(|| format!("instance {i}: {g:?} census {c:?}, i3 {i3}, k3 {k3}"))
    });
    let mut failures = FailureLog::default();
    results.into_iter().flatten().for_each(|m| failures.push(m));
    CensusSummary {
        samples,
        seed,
        max_order,
        pass: failures.is_empty(),
        failures,
    }
}

impl CensusSummary {
    pub fn report(&self, elapsed_ms: u64) -> VerifyReport {
        let params = json!({"samples": self.samples, "N_max": self.max_order});
        let mut r = VerifyReport::new("verify-census", params, self.pass, self.samples, elapsed_ms);
        r.seed = Some(self.seed);
        r.failures = self.failures.examples.clone();
        r.details = to_value(self);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingSummary {
    /// `(N, i_3, 8·C(N/2, 3))`.
    pub rows: Vec<(usize, u64, u64)>,
    pub pass: bool,
}

/// `i_3` of the perfect matching on `N` vertices against `8·C(N/2, 3)`.
pub fn verify_matchings(orders: &[usize]) -> Result<MatchingSummary> {
    let mut rows = Vec::new();
    for &order in orders {
        if order % 2 == 1 {
            return Err(Error::InvalidParameter(format!("perfect matching needs even N, got {order}")));
        }
        let g = matching(order)?;
        rows.push((order, count_independent_sets(&g, 3), 8 * choose(order / 2, 3)));
    }
    Ok(MatchingSummary {
        pass: rows.iter().all(|&(_, a, b)| a == b),
        rows,
    })
}

fn matching(order: usize) -> Result<Graph> {
    Graph::from_edges(order, (0..order / 2).map(|i| (2 * i, 2 * i + 1)))
}

impl MatchingSummary {
    pub fn report(&self, elapsed_ms: u64) -> VerifyReport {
        let orders: Vec<usize> = self.rows.iter().map(|r| r.0).collect();
        let mut r = VerifyReport::new("verify-matchings", json!({"N": orders}), self.pass, self.rows.len() as u64, elapsed_ms);
        r.details = to_value(self);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseRecursionSummary {
    pub order_max: usize,
    pub classes_checked: u64,
    pub matchings_checked: u64,
    pub failures: FailureLog,
    pub pass: bool,
}

/// Every edge-critical `K_2`-covered class (a star forest without isolated
/// vertices): perfect matchings satisfy `i_3 = 8·C(N/2, 3)`, and otherwise
/// a leaf `x` whose neighbor has degree above one satisfies
/// `i_3(G) = i_3(G − x) + i_2(G − N[x])`.
pub fn verify_base_recursion(catalog: &GraphCatalog, order_max: usize) -> Result<BaseRecursionSummary> {
    let mut failures = FailureLog::default();
    let (mut classes_checked, mut matchings_checked) = (0, 0);
    for order in 2..=order_max {
        for g in catalog.classes(order)?.iter().filter(|g| is_edge_critical(g, 2)) {
            classes_checked += 1;
            let i3 = count_independent_sets(g, 3);
            if g.degrees().iter().all(|&d| d == 1) {
                matchings_checked += 1;
                if i3 != 8 * choose(order / 2, 3) {
                    failures.push(format!("{g:?}: i3 {i3} != 8·C({}, 3)", order / 2));
                }
                continue;
            }
            let Some(x) = (0..order).find(|&x| g.degree(x) == 1 && g.neighbors(x).iter().any(|y| g.degree(y) > 1))
            else {
                failures.push(format!("{g:?}: no leaf with a branching neighbor"));
                continue;
            };
            let minus_x = g.remove_vertices(crate::set::VertexSet::singleton(x));
            let minus_closed = g.remove_vertices(g.closed_neighbors(x));
            let rhs = count_independent_sets(&minus_x, 3) + count_independent_sets(&minus_closed, 2);
            if i3 != rhs {
                failures.push(format!("{g:?}: i3 {i3} != {rhs} at leaf {x}"));
            }
        }
    }
    Ok(BaseRecursionSummary {
        order_max,
        classes_checked,
        matchings_checked,
        pass: failures.is_empty(),
        failures,
    })
}

impl BaseRecursionSummary {
    pub fn report(&self, elapsed_ms: u64) -> VerifyReport {
        let mut r = VerifyReport::new("verify-base", json!({"N_max": self.order_max}), self.pass, self.classes_checked, elapsed_ms);
        r.failures = self.failures.examples.clone();
        r.details = to_value(self);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InductionSummary {
    pub n: usize,
    pub t: usize,
    pub orders: Vec<usize>,
    pub classes_checked: u64,
    pub failures: FailureLog,
    pub pass: bool,
}

/// The `t >= 4` induction chain on every edge-critical `K_n`-covered class
/// of the given orders that has a vertex of degree `n − 1`.
pub fn verify_induction(catalog: &GraphCatalog, n: usize, t: usize, orders: &[usize]) -> Result<InductionSummary> {
    let mut failures = FailureLog::default();
    let mut classes_checked = 0;
    for &order in orders {
        let classes = catalog.classes(order)?;
        let audits = catalog.exec().map(&classes, |g| {
            let eligible = n >= 1 && is_edge_critical(g, n) && g.degrees().contains(&(n - 1));
            eligible.then(|| (g.clone(), induction_step_audit(g, n, t)))
        });
        for (g, audit) in audits.into_iter().flatten() {
            classes_checked += 1;
            match audit {
                Ok(a) if a.bound_holds && a.s_in_unique_clique && a.remainder_covered => {}
                Ok(a) => failures.push(format!("{g:?}: {a:?}")),
                Err(e) => failures.push(format!("{g:?}: {e}")),
            }
        }
    }
    Ok(InductionSummary {
        n,
        t,
        orders: orders.to_vec(),
        classes_checked,
        pass: failures.is_empty(),
        failures,
    })
}

impl InductionSummary {
    pub fn report(&self, elapsed_ms: u64) -> VerifyReport {
        let params = json!({"n": self.n, "t": self.t, "N": self.orders});
        let mut r = VerifyReport::new("verify-induction", params, self.pass, self.classes_checked, elapsed_ms);
        r.failures = self.failures.examples.clone();
        r.details = to_value(self);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineSummary {
    pub n: usize,
    pub order_max: usize,
    pub classes_checked: u64,
    pub total_steps: u64,
    pub failures: FailureLog,
    pub pass: bool,
}

/// For connected edge-critical `K_n`-covered classes: stabilizing the
/// clique hypergraph never lowers `i_3`, keeps it connected, and ends with a
/// vertex in every edge.
pub fn verify_pipeline(catalog: &GraphCatalog, n: usize, order_max: usize) -> Result<PipelineSummary> {
    let mut failures = FailureLog::default();
    let (mut classes_checked, mut total_steps) = (0, 0);
    for order in n..=order_max {
        let classes = catalog.classes(order)?;
        let results = catalog.exec().map(&classes, |g| {
            if !g.is_connected() || !is_edge_critical(g, n) {
                return None;
            }
            let assoc: Hypergraph = associated_hypergraph(g, n);
            Some(stabilize(&assoc).map(|st| {
                let i3 = count_independent_sets(g, 3);
                let end = count_independent_sets(&st.result, 3);
                let ok = i3 <= end
                    && st.result.is_connected()
                    && st.result.max_degree() == Some(st.result.edge_count());
                (st.steps as u64, ok.then_some(()).ok_or_else(|| format!("{g:?}: i3 {i3} -> {end}, end {:?}", st.result)))
            }))
        });
        for r in results.into_iter().flatten() {
            classes_checked += 1;
            match r {
                Ok((steps, Ok(()))) => total_steps += steps,
                Ok((_, Err(m))) => failures.push(m),
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    Ok(PipelineSummary {
        n,
        order_max,
        classes_checked,
        total_steps,
        pass: failures.is_empty(),
        failures,
    })
}

impl PipelineSummary {
    pub fn report(&self, elapsed_ms: u64) -> VerifyReport {
        let params = json!({"n": self.n, "N_max": self.order_max});
        let mut r = VerifyReport::new("verify-pipeline", params, self.pass, self.classes_checked, elapsed_ms);
        r.failures = self.failures.examples.clone();
        r.details = to_value(self);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> GraphCatalog {
        GraphCatalog::new(Exec::Sequential)
    }

    #[test]
    fn deficit_examples() {
        assert_eq!(deficit(3, 2, 0).unwrap(), Ratio::from_integer(4));
        assert_eq!(deficit(3, 2, 2).unwrap(), Ratio::from_integer(7));
        assert_eq!([0, 1, 2].map(|r| deficit_poly(3, r)), [17, 12, 9]);
        for n in 3..=50 {
            assert_eq!(deficit_poly(n, n - 1), n * n + n - 3);
        }
        assert!(deficit(2, 2, 0).is_err());
        assert!(deficit(3, 1, 0).is_err());
        assert!(deficit(3, 2, 3).is_err());
    }

    #[test]
    fn deficit_can_be_fractional() {
        assert_eq!(deficit(4, 2, 1).unwrap(), Ratio::new(87, 6));
    }

    #[test]
    fn disconnected_bound_small() {
        let s = verify_disconnected_bound(&catalog(), 20, 20, 7).unwrap();
        assert!(s.pass, "{:?}", s.failures);
        assert!(s.graphs_checked > 0);
    }

    #[test]
    fn two_triangles_have_no_independent_triple() {
        let k3 = Graph::complete(3).unwrap();
        let g = k3.disjoint_union(&k3).unwrap();
        assert_eq!(count_independent_sets(&g, 3), 0);
        assert!(is_kn_covered(&g, 3) && !g.is_connected());
    }

    #[test]
    fn census_small() {
        assert!(verify_census(200, 1, 10, &Exec::Sequential).pass);
    }

    #[test]
    fn matchings() {
        let s = verify_matchings(&[6, 8, 10, 12]).unwrap();
        assert!(s.pass);
        assert_eq!(s.rows[0], (6, 8, 8));
        assert_eq!(s.rows[1], (8, 32, 32));
        assert!(verify_matchings(&[5]).is_err());
    }

    #[test]
    fn base_recursion_star_example() {
        let star = Graph::from_edges(5, (1..5).map(|v| (0, v))).unwrap();
        let minus_leaf = star.remove_vertices(crate::set::VertexSet::singleton(4));
        let minus_closed = star.remove_vertices(star.closed_neighbors(4));
        assert_eq!(count_independent_sets(&minus_leaf, 3), 1);
        assert_eq!(count_independent_sets(&minus_closed, 2), 3);
        assert_eq!(count_independent_sets(&star, 3), 4);
        let s = verify_base_recursion(&catalog(), 7).unwrap();
        assert!(s.pass, "{:?}", s.failures);
        assert!(s.matchings_checked >= 3);
    }

    #[test]
    fn induction_small() {
        let s = verify_induction(&catalog(), 3, 4, &[6, 7]).unwrap();
        assert!(s.pass, "{:?}", s.failures);
        assert!(s.classes_checked > 0);
    }

    #[test]
    fn pipeline_small() {
        let s = verify_pipeline(&catalog(), 3, 7).unwrap();
        assert!(s.pass, "{:?}", s.failures);
    }
}
