use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Subcommand, ValueEnum};
use cover_switch::counting::{count_cliques, count_independent_sets, triple_census};
use cover_switch::covering::{
    associated_hypergraph, check_observation, edge_critical_reduction, is_kn_covered, make_cl, make_split,
};
use cover_switch::iso::canonical_key;
use cover_switch::switching::{default_ordering, edge_switch, partition_audit, stabilize};
use cover_switch::text::{parse_graph, parse_structure, write_graph, write_hypergraph, Structure};
use cover_switch::verify::{
    deficit, verify_base_recursion, verify_census, verify_cl, verify_disconnected_bound, verify_induction,
    verify_main_shifted, verify_matchings, verify_partition, verify_stable_lemma, verify_switching,
    GraphCatalog, SuiteLimits, VerifyReport, VERSION,
};
use cover_switch::{Exec, Graph, Hypergraph, OrderedEdge};
use serde_json::{json, Value};

use crate::batch::BatchArgs;
use crate::output::Output;
use crate::{CliError, CliResult};

/// Shared state for one invocation; a batch reuses it across runs so the
/// enumerated classes are built once.
pub struct Context {
    pub catalog: GraphCatalog,
}

impl Context {
    pub fn new(jobs: usize) -> Self {
        Context {
            catalog: GraphCatalog::new(Exec::from_jobs(jobs)),
        }
    }

    fn exec(&self) -> &Exec {
        self.catalog.exec()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count independent t-sets (and t-cliques of a graph).
    Count {
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Triple census of a graph: triples inducing 0, 1, 2 and 3 edges.
    Census {
        #[command(flatten)]
        input: Input,
    },
    /// Whether every vertex lies in an n-clique.
    CoveredCheck {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        input: Input,
    },
    /// The hypergraph of n-cliques.
    Assoc {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        input: Input,
    },
    /// The s-shadow of a hypergraph; s = 2 prints a graph.
    Shadow {
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Criticality properties, or with --reduce an edge-critical spanning subgraph.
    Critical {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long)]
        reduce: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Build a named graph.
    #[command(subcommand)]
    Make(Make),
    /// Switch at one edge.
    Switch {
        #[command(flatten)]
        pivot: Pivot,
        #[command(flatten)]
        input: Input,
    },
    /// Switch until no edge changes the isomorphism class.
    Stabilize {
        #[command(flatten)]
        input: Input,
    },
    /// Partition the independent 3-sets around a switch.
    AuditSwitch {
        #[command(flatten)]
        pivot: Pivot,
        #[command(flatten)]
        input: Input,
    },
    /// Canonical key as lowercase hex.
    Canon {
        #[command(flatten)]
        input: Input,
    },
    /// All graphs on N vertices up to isomorphism.
    Gen {
        #[arg(long = "N")]
        vertex_count: usize,
        /// Keep only K_n-covered graphs.
        #[arg(long, value_name = "n")]
        covered: Option<usize>,
    },
    /// Maximum i_t over K_n-covered graphs against C(N-n+1, t).
    VerifyMain {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long = "N")]
        vertex_count: usize,
        /// Raise the bound to C(N-n+1+shift, t); a negative control.
        #[arg(long, default_value_t = 0)]
        bound_shift: usize,
    },
    /// Minimum k_t over K_n-covered graphs against the clique construction.
    VerifyCl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long = "N")]
        vertex_count: usize,
    },
    /// Monotonicity of i_3 and f under switching on random hypergraphs.
    VerifySwitching(Seeded<2000>),
    /// The independent 3-set partition around random switches.
    VerifyPartition(Seeded<500>),
    /// Stabilized connected hypergraphs have a vertex in every edge.
    VerifyStable(Seeded<500>),
    /// Base-case identities: triple census, matchings, leaf recursion.
    VerifyBase {
        #[command(flatten)]
        seeded: Seeded<1000>,
        /// Largest order of the random census graphs.
        #[arg(long, default_value_t = 10)]
        census_order: usize,
        /// Largest order of the exhaustive leaf-recursion scan.
        #[arg(long, default_value_t = 7)]
        max_order: usize,
    },
    /// The t >= 4 induction step on edge-critical K_n-covered graphs.
    VerifyInduction {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long = "orders", value_delimiter = ',', required = true)]
        orders: Vec<usize>,
    },
    /// Disconnected K_n-covered graphs stay strictly below the bound.
    VerifyDisconnected {
        #[arg(long, default_value_t = 50)]
        n_max: u64,
        #[arg(long, default_value_t = 50)]
        q_max: u64,
        #[arg(long, default_value_t = 8)]
        max_order: usize,
    },
    /// The disconnected-case deficit for N = qn + r, exactly.
    Deficit {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u64,
    },
    /// Run the verifications listed in a TOML file; always emits JSON lines.
    Batch(BatchArgs),
}

#[derive(Debug, Subcommand)]
pub enum Make {
    /// K_k joined to an independent set of N - k vertices.
    Split {
        #[arg(long = "N")]
        vertex_count: usize,
        #[arg(long)]
        k: usize,
    },
    /// q - r copies of K_n and r copies of K_{n+1}, sharing one vertex.
    Cl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// Input file in graph or hypergraph text format; `-` or nothing reads stdin.
    #[arg(value_name = "FILE")]
    path: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Pivot {
    /// Index of the pivot edge in sorted edge order (the order this tool writes).
    #[arg(long)]
    pivot: usize,
    #[arg(long, value_enum, default_value_t = Order::Default)]
    order: Order,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    /// Nonincreasing degree, ties by smaller id.
    Default,
    /// Increasing vertex id, as the edge is written.
    Given,
}

#[derive(Debug, Args)]
pub struct Seeded<const SAMPLES: u64> {
    #[arg(long, default_value_t = SAMPLES)]
    samples: u64,
    #[arg(long)]
    seed: u64,
}

impl Command {
    /// Whether the command produces a verification report.
    pub fn is_verification(&self) -> bool {
        matches!(
            self,
            Command::VerifyMain { .. }
                | Command::VerifyCl { .. }
                | Command::VerifySwitching(_)
                | Command::VerifyPartition(_)
                | Command::VerifyStable(_)
                | Command::VerifyBase { .. }
                | Command::VerifyInduction { .. }
                | Command::VerifyDisconnected { .. }
        )
    }
}

pub fn execute(command: &Command, ctx: &Context) -> CliResult<Output> {
    let start = Instant::now();
    let elapsed = || start.elapsed().as_millis() as u64;
    let report = |r: VerifyReport| Ok(Output::Report(Box::new(r)));
    match command {
        Command::Count { t, input } => count(&input.read()?, *t),
        Command::Census { input } => {
            let c = triple_census(&input.graph()?);
            let text = format!("tau0 tau1 tau2 tau3\n{} {} {} {}", c.tau0, c.tau1, c.tau2, c.tau3);
            Ok(Output::value(text, &c))
        }
        Command::CoveredCheck { n, input } => {
            let covered = is_kn_covered(&input.graph()?, *n);
            Ok(Output::value(covered.to_string(), &json!({"n": n, "covered": covered})))
        }
        Command::Assoc { n, input } => Ok(hypergraph_output(&associated_hypergraph(&input.graph()?, *n))),
        Command::Shadow { s, input } => {
            let h = input.read()?.to_hypergraph();
            if *s == 2 {
                Ok(graph_output(&h.shadow_graph()))
            } else {
                Ok(hypergraph_output(&h.shadow(*s)?))
            }
        }
        Command::Critical { n, t, reduce, input } => {
            let g = input.graph()?;
            if *reduce {
                Ok(graph_output(&edge_critical_reduction(&g, *n)?))
            } else {
                let r = check_observation(&g, *n, *t);
                let v = serde_json::to_value(&r).expect("report serializes");
                Ok(Output::value(key_values(&v), &r))
            }
        }
        Command::Make(Make::Split { vertex_count, k }) => Ok(graph_output(&make_split(*vertex_count, *k)?)),
        Command::Make(Make::Cl { n, q, r }) => Ok(graph_output(&make_cl(*n, *q, *r)?)),
        Command::Switch { pivot, input } => {
            let h = input.read()?.to_hypergraph();
            let out = edge_switch(&h, &pivot.resolve(&h)?)?;
            Ok(Output::value(write_hypergraph(&out.result), &out))
        }
        Command::Stabilize { input } => {
            let st = stabilize(&input.read()?.to_hypergraph())?;
            Ok(Output::value(write_hypergraph(&st.result), &st))
        }
        Command::AuditSwitch { pivot, input } => {
            let h = input.read()?.to_hypergraph();
            let a = partition_audit(&h, &pivot.resolve(&h)?)?;
            let mut text = String::from("class before after stated monotone\n");
            for i in 0..4 {
                let _ = writeln!(
                    text,
                    "T{} {} {} {} {}",
                    i + 1,
                    a.t_counts[i],
                    a.t_prime_counts[i],
                    a.per_class_ok[i],
                    a.per_class_monotone[i]
                );
            }
            let _ = write!(text, "i3 {} {}\nsums_ok {}", a.i3_before, a.i3_after, a.sums_ok);
            Ok(Output::value(text, &a))
        }
        Command::Canon { input } => {
            let s = input.read()?;
            let key = match &s {
                Structure::Graph(g) => canonical_key(g)?,
                Structure::Hypergraph(h) => canonical_key(h)?,
            };
            Ok(Output::value(key.to_hex(), &json!({"key": key.to_hex()})))
        }
        Command::Gen { vertex_count, covered } => {
            let classes = ctx.catalog.classes(*vertex_count)?;
            let kept: Vec<&Graph> = classes
                .iter()
                .filter(|g| covered.is_none_or(|n| is_kn_covered(g, n)))
                .collect();
            let text = kept.iter().map(|g| write_graph(g)).collect::<Vec<_>>().join("\n");
            Ok(Output::value(text, &kept))
        }
        Command::VerifyMain {
            n,
            t,
            vertex_count,
            bound_shift,
        } => report(verify_main_shifted(&ctx.catalog, *n, *t, *vertex_count, *bound_shift)?.report(elapsed())),
        Command::VerifyCl { n, t, vertex_count } => {
            report(verify_cl(&ctx.catalog, *n, *t, *vertex_count)?.report(elapsed()))
        }
        Command::VerifySwitching(s) => report(verify_switching(s.samples, s.seed, ctx.exec()).report(elapsed())),
        Command::VerifyPartition(s) => report(verify_partition(s.samples, s.seed, ctx.exec()).report(elapsed())),
        Command::VerifyStable(s) => {
            report(verify_stable_lemma(s.samples, s.seed, SuiteLimits::STABLE, ctx.exec()).report(elapsed()))
        }
        Command::VerifyBase {
            seeded,
            census_order,
            max_order,
        } => {
            let census = verify_census(seeded.samples, seeded.seed, *census_order, ctx.exec()).report(0);
            let matchings = verify_matchings(&[6, 8, 10, 12])?.report(0);
            let recursion = verify_base_recursion(&ctx.catalog, *max_order)?.report(0);
            let params = json!({"samples": seeded.samples, "census_order": census_order, "max_order": max_order});
            report(combine("verify-base", params, Some(seeded.seed), [census, matchings, recursion], elapsed()))
        }
        Command::VerifyInduction { n, t, orders } => {
            report(verify_induction(&ctx.catalog, *n, *t, orders)?.report(elapsed()))
        }
        Command::VerifyDisconnected { n_max, q_max, max_order } => {
            report(verify_disconnected_bound(&ctx.catalog, *n_max, *q_max, *max_order)?.report(elapsed()))
        }
        Command::Deficit { n, q, r } => {
            let d = deficit(*n, *q, *r)?;
            Ok(Output::value(d.to_string(), &json!({"n": n, "q": q, "r": r, "deficit": d.to_string()})))
        }
        Command::Batch(_) => Err(CliError::Usage("batch cannot be nested".into())),
    }
}

fn count(s: &Structure, t: usize) -> CliResult<Output> {
    let (independent, cliques) = match s {
        Structure::Graph(g) => (count_independent_sets(g, t), Some(count_cliques(g, t))),
        Structure::Hypergraph(h) => (count_independent_sets(h, t), None),
    };
    let mut text = format!("i_{t} {independent}");
    if let Some(k) = cliques {
        let _ = write!(text, "\nk_{t} {k}");
    }
    Ok(Output::value(text, &json!({"t": t, "independent_sets": independent, "cliques": cliques})))
}

fn graph_output(g: &Graph) -> Output {
    Output::value(write_graph(g), g)
}

fn hypergraph_output(h: &Hypergraph) -> Output {
    Output::value(write_hypergraph(h), h)
}

fn key_values(v: &Value) -> String {
    match v {
        Value::Object(m) => m.iter().map(|(k, x)| format!("{k} {x}")).collect::<Vec<_>>().join("\n"),
        other => other.to_string(),
    }
}

/// Folds several reports into one that passes only if all of them do.
fn combine<const K: usize>(
    command: &str,
    params: Value,
    seed: Option<u64>,
    parts: [VerifyReport; K],
    elapsed_ms: u64,
) -> VerifyReport {
    let mut details = serde_json::Map::new();
    let mut failures = Vec::new();
    for p in &parts {
        details.insert(p.command.clone(), p.details.clone());
        failures.extend(p.failures.iter().map(|f| format!("{}: {f}", p.command)));
    }
    VerifyReport {
        command: command.to_string(),
        params,
        bound: None,
        achieved: None,
        extremal_count: None,
        witness_edges: None,
        matches_construction: None,
        pass: parts.iter().all(|p| p.pass),
        instances_scanned: parts.iter().map(|p| p.instances_scanned).sum(),
        elapsed_ms,
        seed,
        version: VERSION.to_string(),
        failures,
        details: Value::Object(details),
    }
}

impl Input {
    fn text(&self) -> CliResult<String> {
        match &self.path {
            Some(p) if p.as_os_str() != "-" => {
                fs::read_to_string(p).map_err(|e| CliError::Io(format!("cannot read {}: {e}", p.display())))
            }
            _ => {
                let mut s = String::new();
                io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| CliError::Io(format!("cannot read stdin: {e}")))?;
                Ok(s)
            }
        }
    }

    fn read(&self) -> CliResult<Structure> {
        Ok(parse_structure(&self.text()?)?)
    }

    fn graph(&self) -> CliResult<Graph> {
        Ok(parse_graph(&self.text()?)?)
    }
}

impl Pivot {
    fn resolve(&self, h: &Hypergraph) -> CliResult<OrderedEdge> {
        let &e = h.edges().get(self.pivot).ok_or_else(|| {
            CliError::Usage(format!("pivot {} out of range for {} edges", self.pivot, h.edge_count()))
        })?;
        Ok(match self.order {
            Order::Default => default_ordering(h, e)?,
            Order::Given => OrderedEdge::new(h, e.to_vec())?,
        })
    }
}
