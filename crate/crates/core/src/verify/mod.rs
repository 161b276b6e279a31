//! Exhaustive and seeded verifiers for the extremal bounds and the lemmas
//! behind them.
//!
//! Every verifier returns a typed summary with a `report()` method that
//! produces the uniform [`VerifyReport`] record.

mod enumerate;
mod identities;
mod lemmas;
pub mod random;
mod theorems;

use serde::Serialize;
use serde_json::{Map, Value};

pub use enumerate::{enumerate_graphs, GraphCatalog, ENUMERATION_LIMIT, REQUIRED_ENUMERATION_LIMIT};
pub use identities::{
    deficit, deficit_poly, verify_base_recursion, verify_census, verify_disconnected_bound,
    verify_induction, verify_matchings, verify_pipeline, BaseRecursionSummary, CensusSummary,
    DisconnectedSummary, InductionSummary, MatchingSummary, PipelineSummary,
};
pub use lemmas::{
    verify_partition, verify_stable_lemma, verify_switching, PartitionSummary, StableSummary,
    SuiteLimits, SwitchingChecks, SwitchingSummary,
};
pub use theorems::{verify_cl, verify_main, verify_main_shifted, ClSummary, MainSummary};

/// Crate version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How many counterexamples a summary keeps verbatim.
pub(crate) const KEPT_FAILURES: usize = 5;

/// The uniform output record of every verifier.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub command: String,
    pub params: Value,
    pub bound: Option<u64>,
    pub achieved: Option<u64>,
    pub extremal_count: Option<u64>,
    pub witness_edges: Option<Vec<Vec<usize>>>,
    pub matches_construction: Option<bool>,
    pub pass: bool,
    pub instances_scanned: u64,
    pub elapsed_ms: u64,
    pub seed: Option<u64>,
    pub version: String,
    pub failures: Vec<String>,
    pub details: Value,
}

impl VerifyReport {
    pub(crate) fn new(command: &str, params: Value, pass: bool, instances_scanned: u64, elapsed_ms: u64) -> Self {
        VerifyReport {
            command: command.to_string(),
            params,
            bound: None,
            achieved: None,
            extremal_count: None,
            witness_edges: None,
            matches_construction: None,
            pass,
            instances_scanned,
            elapsed_ms,
            seed: None,
            version: VERSION.to_string(),
            failures: Vec::new(),
            details: Value::Object(Map::new()),
        }
    }
}

pub(crate) fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("summaries serialize to JSON")
}

/// Collects up to [`KEPT_FAILURES`] messages while counting all of them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FailureLog {
    pub count: u64,
    pub examples: Vec<String>,
}

impl FailureLog {
    pub(crate) fn push(&mut self, message: String) {
        self.count += 1;
        if self.examples.len() < KEPT_FAILURES {
            self.examples.push(message);
        }
    }

    pub(crate) fn merge(&mut self, other: FailureLog) {
        self.count += other.count;
        for m in other.examples {
            if self.examples.len() < KEPT_FAILURES {
                self.examples.push(m);
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}
