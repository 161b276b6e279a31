use std::fmt::Write as _;

use cover_switch::verify::VerifyReport;
use serde::Serialize;
use serde_json::Value;

use crate::Format;

/// What a subcommand produced, renderable in either format.
pub enum Output {
    Value { text: String, json: Value },
    Report(Box<VerifyReport>),
    /// Batch results: one JSON object per line in either format.
    Reports(Vec<VerifyReport>),
}

impl Output {
    pub fn value<T: Serialize>(text: impl Into<String>, json: &T) -> Self {
        Output::Value {
            text: text.into(),
            json: serde_json::to_value(json).expect("outputs serialize to JSON"),
        }
    }

    pub fn failed(&self) -> bool {
        match self {
            Output::Value { .. } => false,
            Output::Report(r) => !r.pass,
            Output::Reports(rs) => rs.iter().any(|r| !r.pass),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Value { text, .. }, Format::Text) => terminated(text.clone()),
            (Output::Value { json, .. }, Format::Json) => json_line(json),
            (Output::Report(r), Format::Text) => report_text(r),
            (Output::Report(r), Format::Json) => json_line(r),
            (Output::Reports(rs), _) => rs.iter().map(json_line).collect(),
        }
    }
}

fn json_line<T: Serialize>(x: &T) -> String {
    terminated(serde_json::to_string(x).expect("outputs serialize to JSON"))
}

fn terminated(mut s: String) -> String {
    if !s.is_empty() && !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

pub fn report_text(r: &VerifyReport) -> String {
    let mut s = format!("{} {}: {}\n", r.command, r.params, if r.pass { "PASS" } else { "FAIL" });
    let mut facts = Vec::new();
    if let Some(b) = r.bound {
        facts.push(format!("bound {b}"));
    }
    if let Some(a) = r.achieved {
        facts.push(format!("achieved {a}"));
    }
    if let Some(c) = r.extremal_count {
        facts.push(format!("extremal classes {c}"));
    }
    if let Some(m) = r.matches_construction {
        facts.push(format!("matches construction {m}"));
    }
    if !facts.is_empty() {
        let _ = writeln!(s, "  {}", facts.join(", "));
    }
    let seed = r.seed.map_or_else(|| "none".to_string(), |x| x.to_string());
    let _ = writeln!(
        s,
        "  scanned {} in {} ms, seed {seed}, version {}",
        r.instances_scanned, r.elapsed_ms, r.version
    );
    if let Some(w) = &r.witness_edges {
        let _ = writeln!(s, "  witness {w:?}");
    }
    for f in &r.failures {
        let _ = writeln!(s, "  failure: {f}");
    }
    s
}
