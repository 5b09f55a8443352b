//! Text formats for graphs and trees.
//!
//! Graphs: a header `p ght <n> <m>` followed by `m` lines `<u> <v> [cap]`
//! with 0-based ids; the capacity defaults to 1. Trees: a `# n <n>` comment
//! followed by one `<u> <v> <w>` line per edge. Partition trees add lines
//! `s <id>: <nodes>` and write their edges between super-node ids. Lines
//! starting with `#` are comments everywhere.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{CapGraph, NodeId};
use crate::tree::{GHTree, PartitionTree};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty lines with their 1-based numbers; comments removed.
fn content(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| err(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_edge_list(text: &str) -> Result<CapGraph> {
    let mut lines = content(text);
    let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header `p ght <n> <m>`"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") || toks.next() != Some("ght") {
        return Err(err(hl, "expected header `p ght <n> <m>`"));
    }
    let n: usize = number(toks.next(), hl, "node count")?;
    let m: usize = number(toks.next(), hl, "edge count")?;
    if toks.next().is_some() {
        return Err(err(hl, "trailing tokens after header"));
    }
    let mut edges = Vec::with_capacity(m);
    let mut last = hl;
    for (ln, l) in lines {
        last = ln;
        let mut toks = l.split_whitespace();
        let u: NodeId = number(toks.next(), ln, "endpoint")?;
        let v: NodeId = number(toks.next(), ln, "endpoint")?;
        let cap: u64 = match toks.next() {
            Some(t) => number(Some(t), ln, "capacity")?,
            None => 1,
        };
        if toks.next().is_some() {
            return Err(err(ln, "trailing tokens after edge"));
        }
        if u >= n || v >= n {
            return Err(err(ln, format!("node {} out of range for {n} nodes", u.max(v))));
        }
        if u == v {
            return Err(err(ln, format!("self-loop on node {u}")));
        }
        if cap == 0 {
            return Err(err(ln, "zero capacity"));
        }
        if edges.len() == m {
            return Err(err(ln, format!("more than the {m} declared edges")));
        }
        edges.push((u, v, cap));
    }
    if edges.len() != m {
        return Err(err(last, format!("{} edges found, {m} declared", edges.len())));
    }
    CapGraph::from_edges(n, edges)
}

pub fn write_edge_list(g: &CapGraph) -> String {
    let mut out = format!("p ght {} {}\n", g.n(), g.m());
    for e in g.edges() {
        if e.cap == 1 {
            writeln!(out, "{} {}", e.u, e.v).unwrap();
        } else {
            writeln!(out, "{} {} {}", e.u, e.v, e.cap).unwrap();
        }
    }
    out
}

/// Reads `# n <n>` if present.
fn declared_size(text: &str) -> Result<Option<usize>> {
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if let Some(rest) = l.strip_prefix('#') {
            let mut toks = rest.split_whitespace();
            if toks.next() == Some("n") {
                return number(toks.next(), i + 1, "node count").map(Some);
            }
        }
    }
    Ok(None)
}

fn triple(l: &str, ln: usize) -> Result<(usize, usize, u64)> {
    let mut toks = l.split_whitespace();
    let a = number(toks.next(), ln, "endpoint")?;
    let b = number(toks.next(), ln, "endpoint")?;
    let w = number(toks.next(), ln, "weight")?;
    if toks.next().is_some() {
        return Err(err(ln, "trailing tokens after edge"));
    }
    Ok((a, b, w))
}

pub fn parse_tree(text: &str) -> Result<GHTree> {
    let mut edges = Vec::new();
    let mut last = 1;
    for (ln, l) in content(text) {
        last = ln;
        edges.push(triple(l, ln)?);
    }
    let n = match declared_size(text)? {
        Some(n) => n,
        None => edges.iter().map(|&(a, b, _)| a.max(b) + 1).max().unwrap_or(1),
    };
    GHTree::new(n, edges).map_err(|e| err(last, e.to_string()))
}

pub fn write_tree(t: &GHTree) -> String {
    let mut out = format!("# n {}\n", t.n());
    for &(u, v, w) in t.edges() {
        writeln!(out, "{u} {v} {w}").unwrap();
    }
    out
}

pub fn parse_partition_tree(text: &str) -> Result<PartitionTree> {
    let mut supers: Vec<Option<Vec<NodeId>>> = Vec::new();
    let mut edges = Vec::new();
    let mut last = 1;
    for (ln, l) in content(text) {
        last = ln;
        if let Some(rest) = l.strip_prefix("s ") {
            let (id, list) = rest
                .split_once(':')
                .ok_or_else(|| err(ln, "expected `s <id>: <nodes>`"))?;
            let id: usize = number(Some(id.trim()), ln, "super-node id")?;
            let nodes = list
                .split_whitespace()
                .map(|t| number(Some(t), ln, "node"))
                .collect::<Result<Vec<NodeId>>>()?;
            if supers.len() <= id {
                supers.resize(id + 1, None);
            }
            if supers[id].replace(nodes).is_some() {
                return Err(err(ln, format!("super-node {id} listed twice")));
            }
        } else {
            edges.push(triple(l, ln)?);
        }
    }
    let supers = supers
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| err(last, format!("super-node {i} missing"))))
        .collect::<Result<Vec<_>>>()?;
    let n = supers.iter().map(Vec::len).sum();
    let t = PartitionTree {
        supers,
        edges,
        gh_equivalent: true,
    };
    t.validate(n).map_err(|e| err(last, e.to_string()))?;
    Ok(t)
}

pub fn write_partition_tree(t: &PartitionTree) -> String {
    let mut out = String::new();
    for (i, s) in t.supers.iter().enumerate() {
        let list: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        writeln!(out, "s {i}: {}", list.join(" ")).unwrap();
    }
    for &(i, j, w) in &t.edges {
        writeln!(out, "{i} {j} {w}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let text = "# triangle\np ght 3 3\n0 1\n1 2 4\n\n0 2\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.total_cap(), 6);
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn edge_list_errors_carry_lines() {
        let cases = [
            ("", 1),
            ("p graph 2 1\n0 1\n", 1),
            ("p ght 2 1\n0 x\n", 2),
            ("p ght 2 1\n# c\n0 2\n", 3),
            ("p ght 2 2\n0 1\n", 2),
            ("p ght 2 1\n0 1\n1 0\n", 3),
            ("p ght 2 1\n1 1\n", 2),
            ("p ght 2 1\n0 1 0\n", 2),
        ];
        for (text, line) in cases {
            match parse_edge_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn tree_round_trip() {
        let t = GHTree::new(4, vec![(0, 1, 5), (1, 2, 3), (2, 3, 7)]).unwrap();
        assert_eq!(parse_tree(&write_tree(&t)).unwrap(), t);
        let single = GHTree::new(1, vec![]).unwrap();
        assert_eq!(parse_tree(&write_tree(&single)).unwrap(), single);
        assert_eq!(parse_tree("0 1 2\n1 2 1\n").unwrap().n(), 3);
        assert!(matches!(parse_tree("0 1 2\n0 1 2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn partition_tree_round_trip() {
        let t = PartitionTree {
            supers: vec![vec![0, 2], vec![1], vec![3, 4]],
            edges: vec![(0, 1, 2), (0, 2, 1)],
            gh_equivalent: true,
        };
        let back = parse_partition_tree(&write_partition_tree(&t)).unwrap();
        assert_eq!(back.supers, t.supers);
        assert_eq!(back.edges, t.edges);
        assert!(parse_partition_tree("s 0: 0\ns 2: 1\n").is_err());
    }
}
