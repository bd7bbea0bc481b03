//! Line-oriented text formats for graphs, pairings and cycles.
//!
//! Every vertex is written as `<row>.<col>`. Graph files start with
//! `graph <family>` followed by `v` and `e` lines; pairing files hold one pair per
//! line; cycle files hold the cycle on one line. `#` starts a comment everywhere.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::cycle::HamCycle;
use crate::error::{Error, Result};
use crate::graph::{Family, Graph, Vertex};
use crate::matching::Pairing;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn vertex(line: usize, tok: &str) -> Result<Vertex> {
    tok.parse().map_err(|e: String| parse_err(line, e))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.family());
    for v in g.vertices() {
        let _ = writeln!(out, "v {v}");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (n, header) = lines.next().ok_or_else(|| parse_err(1, "empty graph file"))?;
    let family: Family = header
        .strip_prefix("graph ")
        .ok_or_else(|| parse_err(n, "expected `graph <family>` header"))?
        .parse()
        .map_err(|e: String| parse_err(n, e))?;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (n, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["v", a] => {
                let v = vertex(n, a)?;
                if !seen.insert(v) {
                    return Err(parse_err(n, format!("repeated vertex {v}")));
                }
                vertices.push(v);
            }
            ["e", a, b] => edges.push((vertex(n, a)?, vertex(n, b)?)),
            _ => return Err(parse_err(n, format!("expected `v <row>.<col>` or `e <row>.<col> <row>.<col>`, found `{l}`"))),
        }
    }
    vertices.sort_unstable();
    Graph::from_edges(family, vertices, edges)
}

pub fn write_pairing(m: &Pairing) -> String {
    m.pairs().iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}

pub fn parse_pairing(text: &str) -> Result<Pairing> {
    let mut pairs = Vec::new();
    for (n, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            [a, b] => pairs.push((vertex(n, a)?, vertex(n, b)?)),
            _ => return Err(parse_err(n, format!("expected `<row>.<col> <row>.<col>`, found `{l}`"))),
        }
    }
    Pairing::new(pairs)
}

/// Writes the cycle; with a pairing, adds a comment line counting the edge kinds.
pub fn write_cycle(h: &HamCycle, m: Option<&Pairing>) -> String {
    let labels: Vec<String> = h.vertices().iter().map(|v| v.to_string()).collect();
    let mut out = labels.join(" ");
    out.push('\n');
    if let Some(m) = m {
        let k = h.edges().filter(|&(u, v)| m.contains_pair(u, v)).count();
        let _ = writeln!(out, "# pairing-edges: {k}, graph-edges: {}", h.len() - k);
    }
    out
}

pub fn parse_cycle(text: &str) -> Result<HamCycle> {
    let mut lines = content_lines(text);
    let (n, l) = lines.next().ok_or_else(|| parse_err(1, "empty cycle file"))?;
    if let Some((n, _)) = lines.next() {
        return Err(parse_err(n, "a cycle file holds a single line"));
    }
    let order = l.split_whitespace().map(|t| vertex(n, t)).collect::<Result<Vec<_>>>()?;
    HamCycle::new(order).map_err(|e| parse_err(n, e.to_string()))
}
