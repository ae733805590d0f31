//! Edge-list and partition text formats.
//!
//! Edge list: one edge per line, `u v [w]`, ids are non-negative integers,
//! weight defaults to 1. `#` starts a comment; blank lines are skipped.
//! Ids need not be contiguous: they are mapped to `0..n` in ascending order.
//!
//! Partition: one `v module` pair per line, using the same external ids.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// A parsed graph together with its external vertex ids.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    pub graph: Graph,
    /// `labels[v]` is the external id of internal vertex `v` (ascending).
    pub labels: Vec<u64>,
}

impl LabeledGraph {
    /// Identity labels `0..n`.
    pub fn identity(graph: Graph) -> Self {
        let labels = (0..graph.n() as u64).collect();
        LabeledGraph { graph, labels }
    }

    pub fn index_of(&self, label: u64) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }
}

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<u64> {
    tok.parse::<u64>()
        .map_err(|_| parse_err(line, format!("vertex id `{tok}` is not a non-negative integer")))
}

pub fn parse_edge_list(text: &str) -> Result<LabeledGraph> {
    let mut raw: Vec<(u64, u64, f64, usize)> = Vec::new();
    let mut ids = BTreeSet::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let body = content(line);
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if !(2..=3).contains(&toks.len()) {
            return Err(parse_err(ln, format!("expected `u v [w]`, found {} fields", toks.len())));
        }
        let u = parse_id(toks[0], ln)?;
        let v = parse_id(toks[1], ln)?;
        let w = match toks.get(2) {
            None => 1.0,
            Some(t) => t
                .parse::<f64>()
                .map_err(|_| parse_err(ln, format!("weight `{t}` is not a number")))?,
        };
        if !(w > 0.0) || !w.is_finite() {
            return Err(parse_err(ln, format!("weight must be positive and finite, got {w}")));
        }
        if u == v {
            return Err(parse_err(ln, format!("self-loop on vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(ln, format!("duplicate edge {u}-{v}")));
        }
        ids.insert(u);
        ids.insert(v);
        raw.push((u, v, w, ln));
    }
    let labels: Vec<u64> = ids.into_iter().collect();
    let index: HashMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let edges: Vec<(usize, usize, f64)> = raw.iter().map(|&(u, v, w, _)| (index[&u], index[&v], w)).collect();
    let graph = Graph::new(labels.len(), edges)?;
    Ok(LabeledGraph { graph, labels })
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<LabeledGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Writes `u v` lines (with a weight column only when some weight is not 1).
pub fn write_edge_list(g: &Graph, labels: Option<&[u64]>) -> String {
    let weighted = !g.is_unweighted();
    let name = |v: usize| labels.map_or(v as u64, |l| l[v]);
    let mut out = String::with_capacity(g.m() * 12);
    for &(u, v, w) in g.edges() {
        if weighted {
            let _ = writeln!(out, "{} {} {}", name(u), name(v), w);
        } else {
            let _ = writeln!(out, "{} {}", name(u), name(v));
        }
    }
    out
}

/// Parses `v module` lines against the graph's labels. Every vertex must be
/// assigned exactly once.
pub fn parse_partition(text: &str, graph: &LabeledGraph) -> Result<Partition> {
    let n = graph.graph.n();
    let mut assignment: Vec<Option<u64>> = vec![None; n];
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let body = content(line);
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(ln, format!("expected `v module`, found {} fields", toks.len())));
        }
        let label = parse_id(toks[0], ln)?;
        let module = toks[1]
            .parse::<u64>()
            .map_err(|_| parse_err(ln, format!("module id `{}` is not a non-negative integer", toks[1])))?;
        let v = graph
            .index_of(label)
            .ok_or_else(|| parse_err(ln, format!("vertex {label} is not in the graph")))?;
        if assignment[v].replace(module).is_some() {
            return Err(parse_err(ln, format!("vertex {label} assigned twice")));
        }
    }
    if let Some(v) = assignment.iter().position(Option::is_none) {
        return Err(Error::Input(format!("vertex {} has no module", graph.labels[v])));
    }
    let labels: Vec<u64> = assignment.into_iter().map(|m| m.expect("checked")).collect();
    Ok(Partition::from_labels(&labels))
}

pub fn read_partition(path: impl AsRef<Path>, graph: &LabeledGraph) -> Result<Partition> {
    parse_partition(&std::fs::read_to_string(path)?, graph)
}

/// `v module` lines in vertex order.
pub fn write_partition(p: &Partition, labels: Option<&[u64]>) -> String {
    let mut out = String::new();
    for (v, &j) in p.assignment().iter().enumerate() {
        let _ = writeln!(out, "{} {}", labels.map_or(v as u64, |l| l[v]), j);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_weights_and_labels() {
        let text = "# header\n10 20\n\n20 30 2.5  # trailing\n30 10\n";
        let lg = parse_edge_list(text).unwrap();
        assert_eq!(lg.labels, vec![10, 20, 30]);
        assert_eq!(lg.graph.m(), 3);
        assert_eq!(lg.graph.edge_weight(1, 2), Some(2.5));
        assert_eq!(lg.graph.degree(2).unwrap(), 3.5);
        let again = parse_edge_list(&write_edge_list(&lg.graph, Some(&lg.labels))).unwrap();
        assert_eq!(again, lg);
    }

    #[test]
    fn reports_line_numbers() {
        let cases = [
            ("0 1\na b\n", 2),
            ("0 1\n1 2 3 4\n", 2),
            ("0 1\n\n1 1\n", 3),
            ("0 1\n1 0\n", 2),
            ("0 1 -2\n", 1),
            ("0 1 x\n", 1),
        ];
        for (text, line) in cases {
            match parse_edge_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn partition_round_trip() {
        let lg = parse_edge_list("5 7\n7 9\n9 5\n").unwrap();
        let p = parse_partition("9 4\n5 1\n7 1 # same\n", &lg).unwrap();
        assert_eq!(p.assignment(), &[0, 0, 1]);
        let text = write_partition(&p, Some(&lg.labels));
        assert_eq!(parse_partition(&text, &lg).unwrap(), p);
        assert!(matches!(parse_partition("5 1\n", &lg), Err(Error::Input(_))));
        assert!(matches!(parse_partition("5 1\n5 2\n", &lg), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_partition("6 1\n", &lg), Err(Error::Parse { line: 1, .. })));
    }
}
