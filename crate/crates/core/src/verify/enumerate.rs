use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::iso::{canonical_graph, CanonicalKey};
use crate::par::Exec;

/// Largest order the verifiers are required to handle.
pub const REQUIRED_ENUMERATION_LIMIT: usize = 8;
/// Largest order enumeration accepts at all.
pub const ENUMERATION_LIMIT: usize = 9;

/// One canonical representative per isomorphism class of graphs on `n`
/// vertices, sorted by canonical key.
///
/// Each class on `n` vertices is obtained from a class on `n − 1` vertices
/// by adding a vertex with every possible neighborhood; the extensions are
/// canonized and deduplicated by key.
pub fn enumerate_graphs(n: usize, exec: &Exec) -> Result<Vec<Graph>> {
    check_order(n)?;
    let mut layer = vec![Graph::empty(0)?];
    for _ in 0..n {
        layer = extend(&layer, exec);
    }
    Ok(layer)
}

fn check_order(n: usize) -> Result<()> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::SizeLimit {
            count: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

fn extend(prev: &[Graph], exec: &Exec) -> Vec<Graph> {
    let Some(first) = prev.first() else {
        return Vec::new();
    };
    let k = first.vertex_count();
    let children = exec.map(prev, |g| {
        let mut local: HashMap<CanonicalKey, Graph> = HashMap::new();
        for nb in 0u64..(1u64 << k) {
            let mut rows = g.rows().to_vec();
            for (u, row) in rows.iter_mut().enumerate() {
                *row |= (nb >> u & 1) << k;
            }
            rows.push(nb);
            let (canon, key) = canonical_graph(&Graph::from_rows(k + 1, rows))
                .expect("enumeration stays under the canonical size limit");
            local.entry(key).or_insert(canon);
        }
        local
    });
    let mut all: BTreeMap<CanonicalKey, Graph> = BTreeMap::new();
    for local in children {
        for (key, g) in local {
            all.entry(key).or_insert(g);
        }
    }
    all.into_values().collect()
}

/// Memoized class lists, built layer by layer and shared across verifiers.
#[derive(Debug)]
pub struct GraphCatalog {
    exec: Exec,
    layers: Mutex<Vec<Arc<Vec<Graph>>>>,
}

impl GraphCatalog {
    pub fn new(exec: Exec) -> Self {
        GraphCatalog {
            exec,
            layers: Mutex::new(Vec::new()),
        }
    }

    pub fn exec(&self) -> &Exec {
        &self.exec
    }

    pub fn classes(&self, n: usize) -> Result<Arc<Vec<Graph>>> {
        check_order(n)?;
        let mut layers = self.layers.lock().unwrap_or_else(|e| e.into_inner());
        if layers.is_empty() {
            layers.push(Arc::new(vec![Graph::empty(0)?]));
        }
        while layers.len() <= n {
            let next = extend(layers.last().expect("seeded above"), &self.exec);
            layers.push(Arc::new(next));
        }
        Ok(Arc::clone(&layers[n]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Oracle: canonize every labeled graph on `n` vertices.
    fn labeled_class_count(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let mut keys = BTreeSet::new();
        for bits in 0u64..(1u64 << pairs.len()) {
            let edges = pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &p)| p);
            let g = Graph::from_edges(n, edges).unwrap();
            keys.insert(canonical_graph(&g).unwrap().1);
        }
        keys.len()
    }

    #[test]
    fn small_class_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| enumerate_graphs(n, &Exec::Sequential).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34]);
    }

    #[test]
    fn matches_labeled_oracle() {
        for n in 0..=6 {
            assert_eq!(enumerate_graphs(n, &Exec::Sequential).unwrap().len(), labeled_class_count(n), "N = {n}");
        }
    }

    #[test]
    fn representatives_are_pairwise_distinct_and_canonical() {
        let classes = enumerate_graphs(6, &Exec::Sequential).unwrap();
        assert_eq!(classes.len(), 156);
        let mut keys = BTreeSet::new();
        for g in classes.iter() {
            let (canon, key) = canonical_graph(g).unwrap();
            assert_eq!(&canon, g);
            assert!(keys.insert(key));
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let seq = enumerate_graphs(6, &Exec::Sequential).unwrap();
        let par = enumerate_graphs(6, &Exec::Parallel { jobs: 3 }).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn catalog_memoizes() {
        let cat = GraphCatalog::new(Exec::Sequential);
        assert_eq!(cat.classes(5).unwrap().len(), 34);
        assert_eq!(cat.classes(3).unwrap().len(), 4);
        assert!(Arc::ptr_eq(&cat.classes(5).unwrap(), &cat.classes(5).unwrap()));
        assert!(matches!(cat.classes(10), Err(Error::SizeLimit { .. })));
    }
}
