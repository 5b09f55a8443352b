//! Exact maximum flow with an optional value cap.
//!
//! The engine runs blocking-flow phases over BFS level graphs on integer
//! capacities. Every undirected edge becomes a pair of opposite arcs that
//! are each other's residual twin. When a cap is given, augmentation stops
//! as soon as the flow reaches it and the result only says "at least cap".
//!
//! The sink side returned with an exact result is the *latest* minimum cut:
//! the set of nodes that can still reach `t` in the final residual network,
//! which is the unique inclusion-minimal minimum cut side containing `t`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{check_node, CapGraph, CutSide, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowStatus {
    /// The value is the exact connectivity.
    Exact,
    /// The connectivity is at least the requested cap.
    AtLeastCap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub status: FlowStatus,
    pub value: u64,
    /// Present only for [`FlowStatus::Exact`]; contains `t` and never `s`.
    pub sink_side: Option<CutSide>,
}

impl FlowResult {
    pub fn is_exact(&self) -> bool {
        self.status == FlowStatus::Exact
    }

    /// Exact value, or `None` when capped out.
    pub fn exact_value(&self) -> Option<u64> {
        self.is_exact().then_some(self.value)
    }
}

/// Residual network over the arcs of a [`CapGraph`]. Arc `2e` runs
/// `u -> v` for edge `e = (u, v)`, arc `2e + 1` runs back.
struct Residual<'g> {
    g: &'g CapGraph,
    res: Vec<u64>,
    head: Vec<NodeId>,
    /// CSR offsets into `arcs`.
    start: Vec<usize>,
    arcs: Vec<usize>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

const UNREACHED: u32 = u32::MAX;

impl<'g> Residual<'g> {
    fn new(g: &'g CapGraph) -> Self {
        let n = g.n();
        let mut res = Vec::with_capacity(2 * g.m());
        let mut head = Vec::with_capacity(2 * g.m());
        for e in g.edges() {
            res.push(e.cap);
            head.push(e.v);
            res.push(e.cap);
            head.push(e.u);
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut arcs = Vec::with_capacity(2 * g.m());
        start.push(0);
        for x in 0..n {
            for &(_, e) in g.neighbors(x) {
                let a = if g.edge(e).u == x { 2 * e } else { 2 * e + 1 };
                arcs.push(a);
            }
            start.push(arcs.len());
        }
        Residual {
            g,
            res,
            head,
            start,
            arcs,
            level: vec![UNREACHED; n],
            iter: vec![0; n],
        }
    }

    fn bfs_levels(&mut self, s: NodeId, t: NodeId) -> bool {
        self.level.fill(UNREACHED);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.arcs[self.start[x]..self.start[x + 1]] {
                let y = self.head[a];
                if self.res[a] > 0 && self.level[y] == UNREACHED {
                    self.level[y] = self.level[x] + 1;
                    if y == t {
                        return true;
                    }
                    queue.push_back(y);
                }
            }
        }
        self.level[t] != UNREACHED
    }

    /// Augments along level-graph paths until blocked or `limit` is pushed.
    fn blocking_flow(&mut self, s: NodeId, t: NodeId, limit: u64) -> u64 {
        for x in 0..self.g.n() {
            self.iter[x] = self.start[x];
        }
        let mut total = 0u64;
        let mut path: Vec<usize> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                let mut push = limit - total;
                for &a in &path {
                    push = push.min(self.res[a]);
                }
                for &a in &path {
                    self.res[a] -= push;
                    self.res[a ^ 1] += push;
                }
                total += push;
                if total == limit {
                    return total;
                }
                let k = path.iter().position(|&a| self.res[a] == 0).unwrap_or(path.len());
                path.truncate(k);
                v = path.last().map_or(s, |&a| self.head[a]);
                continue;
            }
            let end = self.start[v + 1];
            let mut advanced = false;
            while self.iter[v] < end {
                let a = self.arcs[self.iter[v]];
                let w = self.head[a];
                if self.res[a] > 0 && self.level[w] == self.level[v] + 1 {
                    path.push(a);
                    v = w;
                    advanced = true;
                    break;
                }
                self.iter[v] += 1;
            }
            if !advanced {
                if v == s {
                    return total;
                }
                self.level[v] = UNREACHED;
                let a = path.pop().expect("non-source node has an entry arc");
                v = self.head[a ^ 1];
                self.iter[v] += 1;
            }
        }
    }

    /// Nodes with a residual path to `t`.
    fn reaching(&self, t: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.g.n()];
        seen[t] = true;
        let mut out = vec![t];
        let mut i = 0;
        while i < out.len() {
            let y = out[i];
            i += 1;
            for &a in &self.arcs[self.start[y]..self.start[y + 1]] {
                let x = self.head[a];
                if !seen[x] && self.res[a ^ 1] > 0 {
                    seen[x] = true;
                    out.push(x);
                }
            }
        }
        out
    }
}

/// Maximum `(s, t)`-flow, stopping early once it reaches `cap`.
///
/// Returns [`FlowStatus::Exact`] with a minimum cut sink side when the
/// connectivity is below `cap` (or `cap` is `None`), and
/// [`FlowStatus::AtLeastCap`] otherwise. Disconnected endpoints give an exact
/// zero with `t`'s component as sink side.
pub fn max_flow_capped(g: &CapGraph, s: NodeId, t: NodeId, cap: Option<u64>) -> Result<FlowResult> {
    check_node(s, g.n())?;
    check_node(t, g.n())?;
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    let limit = cap.unwrap_or(u64::MAX);
    let mut net = Residual::new(g);
    let mut flow = 0u64;
    while flow < limit && net.bfs_levels(s, t) {
        flow += net.blocking_flow(s, t, limit - flow);
    }
    if flow >= limit {
        return Ok(FlowResult {
            status: FlowStatus::AtLeastCap,
            value: limit,
            sink_side: None,
        });
    }
    let side = net.reaching(t);
    Ok(FlowResult {
        status: FlowStatus::Exact,
        value: flow,
        sink_side: Some(CutSide::new(side, flow)),
    })
}

/// The latest minimum `(s, t)`-cut: the inclusion-minimal minimum cut side
/// containing `t`. Source-side latest cuts come from swapping arguments.
pub fn latest_min_cut(g: &CapGraph, s: NodeId, t: NodeId, cap: Option<u64>) -> Result<FlowResult> {
    max_flow_capped(g, s, t, cap)
}
