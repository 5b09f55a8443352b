//! Partition trees over super-nodes and weighted cut trees over nodes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{check_node, NodeId};

/// A tree whose vertices are disjoint node sets covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTree {
    pub supers: Vec<Vec<NodeId>>,
    /// `(i, j, weight)` between super-node indices.
    pub edges: Vec<(usize, usize, u64)>,
    /// Set when the tree came out of a (possibly truncated) Gomory-Hu run.
    pub gh_equivalent: bool,
}

impl PartitionTree {
    /// One super-node holding every node.
    pub fn single(n: usize) -> Self {
        PartitionTree {
            supers: vec![(0..n).collect()],
            edges: Vec::new(),
            gh_equivalent: true,
        }
    }

    pub fn len(&self) -> usize {
        self.supers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supers.is_empty()
    }

    /// Super-node index of every node.
    pub fn super_of(&self, n: usize) -> Vec<usize> {
        let mut of = vec![usize::MAX; n];
        for (i, s) in self.supers.iter().enumerate() {
            for &v in s {
                of[v] = i;
            }
        }
        of
    }

    /// `(neighbor, weight)` lists per super-node.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.supers.len()];
        for &(i, j, w) in &self.edges {
            adj[i].push((j, w));
            adj[j].push((i, w));
        }
        adj
    }

    /// Super-node indices of each component of the tree minus `i`, one
    /// component per neighbor of `i` in edge order.
    pub fn components_without(&self, i: usize) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        adj[i]
            .iter()
            .map(|&(start, _)| {
                let mut comp = vec![start];
                let mut stack = vec![(start, i)];
                while let Some((x, parent)) = stack.pop() {
                    for &(y, _) in &adj[x] {
                        if y != parent {
                            comp.push(y);
                            stack.push((y, x));
                        }
                    }
                }
                comp
            })
            .collect()
    }

    /// Checks that the super-nodes partition `0..n` and the edges form a tree.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidPartitionTree(m.to_string()));
        let mut seen = vec![false; n];
        for s in &self.supers {
            if s.is_empty() {
                return bad("empty super-node");
            }
            for &v in s {
                check_node(v, n)?;
                if seen[v] {
                    return bad("node in two super-nodes");
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|&b| !b) {
            return bad("super-nodes do not cover every node");
        }
        let k = self.supers.len();
        if self.edges.len() + 1 != k {
            return bad("edge count is not super-node count minus one");
        }
        let mut dsu = Dsu::new(k);
        for &(i, j, _) in &self.edges {
            if i >= k || j >= k {
                return bad("edge endpoint out of range");
            }
            if !dsu.union(i, j) {
                return bad("edges contain a cycle");
            }
        }
        Ok(())
    }

    /// Lightest edge between the super-nodes holding `a` and `b`, or `None`
    /// when they share a super-node.
    pub fn min_between(&self, n: usize, a: NodeId, b: NodeId) -> Option<u64> {
        let of = self.super_of(n);
        let (sa, sb) = (of[a], of[b]);
        if sa == sb {
            return None;
        }
        let adj = self.adjacency();
        let mut best = vec![None::<u64>; self.supers.len()];
        let mut visited = vec![false; self.supers.len()];
        visited[sa] = true;
        let mut stack = vec![(sa, u64::MAX)];
        while let Some((x, m)) = stack.pop() {
            if x == sb {
                return Some(m);
            }
            for &(y, w) in &adj[x] {
                if !visited[y] {
                    visited[y] = true;
                    best[y] = Some(m.min(w));
                    stack.push((y, m.min(w)));
                }
            }
        }
        None
    }
}

/// A weighted spanning tree on the node set `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GHTree {
    n: usize,
    edges: Vec<(NodeId, NodeId, u64)>,
}

impl GHTree {
    /// Validates that `edges` is a spanning tree of `0..n`.
    pub fn new(n: usize, edges: Vec<(NodeId, NodeId, u64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NonSpanningTree("no nodes".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::NonSpanningTree(format!("{} edges for {} nodes", edges.len(), n)));
        }
        let mut dsu = Dsu::new(n);
        for &(u, v, _) in &edges {
            check_node(u, n)?;
            check_node(v, n)?;
            if !dsu.union(u, v) {
                return Err(Error::NonSpanningTree(format!("cycle through ({u}, {v})")));
            }
        }
        Ok(GHTree { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(NodeId, NodeId, u64)] {
        &self.edges
    }

    /// `(neighbor, weight, edge index)` lists.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, u64, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(u, v, w)) in self.edges.iter().enumerate() {
            adj[u].push((v, w, i));
            adj[v].push((u, w, i));
        }
        adj
    }

    /// Nodes on `u`'s side once edge `i = (u, v)` is removed.
    pub fn side_of_edge(&self, i: usize) -> Vec<NodeId> {
        let adj = self.adjacency();
        let (u, _, _) = self.edges[i];
        let mut seen = vec![false; self.n];
        seen[u] = true;
        let mut out = vec![u];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            k += 1;
            for &(y, _, e) in &adj[x] {
                if e != i && !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// All-pairs path-minimum matrix; the diagonal is zero.
    pub fn value_matrix(&self) -> Vec<Vec<u64>> {
        let adj = self.adjacency();
        let mut mat = vec![vec![0u64; self.n]; self.n];
        for s in 0..self.n {
            let row = &mut mat[s];
            let mut stack = vec![(s, usize::MAX, u64::MAX)];
            while let Some((x, parent, m)) = stack.pop() {
                if x != s {
                    row[x] = m;
                }
                for &(y, w, _) in &adj[x] {
                    if y != parent {
                        stack.push((y, x, m.min(w)));
                    }
                }
            }
        }
        mat
    }

    /// Edges as a map keyed by normalized endpoints, for comparisons.
    pub fn edge_map(&self) -> BTreeMap<(NodeId, NodeId), u64> {
        self.edges.iter().map(|&(u, v, w)| ((u.min(v), u.max(v)), w)).collect()
    }
}

/// Path-minimum queries on a [`GHTree`] by binary lifting:
/// `O(n log n)` preprocessing, `O(log n)` per query.
#[derive(Clone, Debug)]
pub struct PathMinIndex {
    depth: Vec<u32>,
    /// `up[k][v]`: the `2^k`-th ancestor of `v`.
    up: Vec<Vec<NodeId>>,
    /// `low[k][v]`: lightest weight on the `2^k` edges above `v`.
    low: Vec<Vec<u64>>,
}

impl PathMinIndex {
    pub fn new(t: &GHTree) -> Self {
        let n = t.n();
        let adj = t.adjacency();
        let mut depth = vec![0u32; n];
        let mut parent = vec![0usize; n];
        let mut pw = vec![u64::MAX; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &(y, w, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    pw[y] = w;
                    depth[y] = depth[x] + 1;
                    stack.push(y);
                }
            }
        }
        let levels = (usize::BITS - n.max(1).leading_zeros()) as usize;
        let mut up = vec![parent];
        let mut low = vec![pw];
        for k in 1..levels.max(1) {
            let (pu, pl) = (&up[k - 1], &low[k - 1]);
            let nu: Vec<NodeId> = (0..n).map(|v| pu[pu[v]]).collect();
            let nl: Vec<u64> = (0..n).map(|v| pl[v].min(pl[pu[v]])).collect();
            up.push(nu);
            low.push(nl);
        }
        PathMinIndex { depth, up, low }
    }

    /// Lightest edge on the `u`-`v` path.
    pub fn query(&self, mut u: NodeId, mut v: NodeId) -> Result<u64> {
        let n = self.depth.len();
        check_node(u, n)?;
        check_node(v, n)?;
        if u == v {
            return Err(Error::SameEndpoints(u));
        }
        let mut best = u64::MAX;
        if self.depth[u] < self.depth[v] {
            std::mem::swap(&mut u, &mut v);
        }
        let mut diff = self.depth[u] - self.depth[v];
        let mut k = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                best = best.min(self.low[k][u]);
                u = self.up[k][u];
            }
            diff >>= 1;
            k += 1;
        }
        if u == v {
            return Ok(best);
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][u] != self.up[k][v] {
                best = best.min(self.low[k][u]).min(self.low[k][v]);
                u = self.up[k][u];
                v = self.up[k][v];
            }
        }
        Ok(best.min(self.low[0][u]).min(self.low[0][v]))
    }
}

/// Minimum edge weight on the tree path between `u` and `v`.
pub fn apmf_query(t: &GHTree, u: NodeId, v: NodeId) -> Result<u64> {
    PathMinIndex::new(t).query(u, v)
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// `false` when already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
