//! Plain-text graph and hypergraph formats.
//!
//! ```text
//! graph N M          hypergraph N M
//! u v                k v1 v2 ... vk
//! ...                ...
//! ```
//!
//! Graph edges need `u < v`; hyperedge vertex lists must be strictly
//! increasing. Blank lines are ignored, so several objects can be
//! concatenated into one stream.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;
use crate::set::VertexSet;

/// Either kind of object, as read from a stream whose header decides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Graph(Graph),
    Hypergraph(Hypergraph),
}

impl Structure {
    /// Views either kind as a hypergraph (graph edges become 2-edges).
    pub fn to_hypergraph(&self) -> Hypergraph {
        match self {
            Structure::Graph(g) => Hypergraph::from_graph(g),
            Structure::Hypergraph(h) => h.clone(),
        }
    }

    pub fn write(&self) -> String {
        match self {
            Structure::Graph(g) => write_graph(g),
            Structure::Hypergraph(h) => write_hypergraph(h),
        }
    }
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("graph {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("hypergraph {} {}\n", h.vertex_count(), h.edge_count());
    for e in h.edges() {
        let _ = write!(out, "{}", e.len());
        for v in *e {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_graph(input: &str) -> Result<Graph> {
    match parse_structure(input)? {
        Structure::Graph(g) => Ok(g),
        Structure::Hypergraph(_) => Err(perr(1, "expected a `graph` header")),
    }
}

pub fn parse_hypergraph(input: &str) -> Result<Hypergraph> {
    match parse_structure(input)? {
        Structure::Hypergraph(h) => Ok(h),
        Structure::Graph(_) => Err(perr(1, "expected a `hypergraph` header")),
    }
}

/// Parses exactly one object; trailing non-blank content is an error.
pub fn parse_structure(input: &str) -> Result<Structure> {
    let mut lines = Lines::new(input);
    let s = read_one(&mut lines)?.ok_or_else(|| perr(1, "empty input"))?;
    if let Some((no, _)) = lines.next_content() {
        return Err(perr(no, "unexpected content after the last edge"));
    }
    Ok(s)
}

/// Parses a concatenation of objects of either kind.
pub fn parse_many(input: &str) -> Result<Vec<Structure>> {
    let mut lines = Lines::new(input);
    let mut out = Vec::new();
    while let Some(s) = read_one(&mut lines)? {
        out.push(s);
    }
    Ok(out)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(s: &'a str) -> Self {
        Lines {
            inner: s.lines().enumerate(),
        }
    }

    /// Next non-blank line with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .by_ref()
            .map(|(i, l)| (i + 1, l.trim()))
            .find(|(_, l)| !l.is_empty())
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| perr(line, format!("expected a nonnegative integer, found `{tok}`")))
        })
        .collect()
}

fn read_one(lines: &mut Lines<'_>) -> Result<Option<Structure>> {
    let Some((hline, header)) = lines.next_content() else {
        return Ok(None);
    };
    let mut parts = header.split_whitespace();
    let kind = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    if kind != "graph" && kind != "hypergraph" {
        return Err(perr(hline, format!("expected `graph` or `hypergraph`, found `{kind}`")));
    }
    let dims = numbers(hline, &rest.join(" "))?;
    let [n, m] = dims[..] else {
        return Err(perr(hline, "header needs exactly two numbers: N M"));
    };
    if n > crate::MAX_VERTICES {
        return Err(perr(hline, format!("N = {n} exceeds {}", crate::MAX_VERTICES)));
    }

    let mut edges: Vec<(usize, VertexSet)> = Vec::with_capacity(m);
    for _ in 0..m {
        let (no, text) = lines
            .next_content()
            .ok_or_else(|| perr(hline, format!("expected {m} edge lines")))?;
        let vs = numbers(no, text)?;
        let members = if kind == "graph" {
            let [u, v] = vs[..] else {
                return Err(perr(no, "graph edge lines need exactly two vertices"));
            };
            if u >= v {
                return Err(perr(no, format!("edge `{u} {v}` must satisfy u < v")));
            }
            vec![u, v]
        } else {
            let Some((&k, members)) = vs.split_first() else {
                return Err(perr(no, "empty hyperedge line"));
            };
            if k == 0 {
                return Err(perr(no, "hyperedge size must be at least 1"));
            }
            if members.len() != k {
                return Err(perr(no, format!("declared {k} vertices, found {}", members.len())));
            }
            if members.windows(2).any(|w| w[0] >= w[1]) {
                return Err(perr(no, "hyperedge vertices must be strictly increasing"));
            }
            members.to_vec()
        };
        if let Some(&v) = members.iter().find(|&&v| v >= n) {
            return Err(perr(no, format!("vertex {v} out of range for N = {n}")));
        }
        let set: VertexSet = members.into_iter().collect();
        if let Some((prev, _)) = edges.iter().find(|(_, e)| *e == set) {
            return Err(perr(no, format!("duplicate of the edge on line {prev}")));
        }
        edges.push((no, set));
    }

    let sets = edges.into_iter().map(|(_, e)| e);
    let s = if kind == "graph" {
        let pairs: Vec<(usize, usize)> = sets
            .map(|e| {
                let v = e.to_vec();
                (v[0], v[1])
            })
            .collect();
        Structure::Graph(Graph::from_edges(n, pairs)?)
    } else {
        Structure::Hypergraph(Hypergraph::new(n, sets)?)
    };
    Ok(Some(s))
}
