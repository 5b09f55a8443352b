//! Nagamochi-Ibaraki sparse connectivity certificates.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{CapGraph, Edge};

/// Keeps the first `k` forests of a maximum-adjacency scan.
///
/// A capacity-`c` edge counts as `c` parallel unit edges. When an edge is
/// scanned toward an unvisited endpoint `v` with `r(v)` capacity already
/// reaching it from visited nodes, its units land in forests
/// `r(v) + 1 ..= r(v) + c`, and only those numbered at most `k` survive.
///
/// Every cut of value below `k` keeps its exact value, every other cut keeps
/// value at least `k`, and the result has at most `k (n - 1)` units.
pub fn nagamochi_ibaraki(g: &CapGraph, k: u64) -> CapGraph {
    let n = g.n();
    let mut r = vec![0u64; n];
    let mut visited = vec![false; n];
    let mut kept = vec![0u64; g.m()];
    let mut heap: BinaryHeap<(u64, Reverse<usize>)> = BinaryHeap::new();
    let mut next_start = 0;
    loop {
        let u = match heap.pop() {
            Some((ru, Reverse(u))) => {
                if visited[u] || ru != r[u] {
                    continue;
                }
                u
            }
            None => {
                while next_start < n && visited[next_start] {
                    next_start += 1;
                }
                if next_start == n {
                    break;
                }
                next_start
            }
        };
        visited[u] = true;
        for &(v, e) in g.neighbors(u) {
            if visited[v] {
                continue;
            }
            let c = g.edge(e).cap;
            kept[e] = c.min(k.saturating_sub(r[v]));
            r[v] += c;
            heap.push((r[v], Reverse(v)));
        }
    }
    let edges = g
        .edges()
        .iter()
        .zip(&kept)
        .filter(|(_, &c)| c > 0)
        .map(|(e, &c)| Edge { cap: c, ..*e });
    CapGraph::from_merged(n, edges.collect())
}
