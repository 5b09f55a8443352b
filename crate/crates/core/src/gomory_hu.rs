//! Gomory-Hu style tree builders: the classic contraction algorithm,
//! Gusfield's variant, partial trees for a terminal subset and k-partial
//! trees.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{build_auxiliary, CapGraph, NodeId};
use crate::meter::Meter;
use crate::tree::{GHTree, PartitionTree};

/// Splits super-nodes until every one holds at most one terminal, or until
/// every remaining terminal pair inside a super-node is known to have
/// connectivity at least `cap`.
///
/// Each split contracts the components of the tree minus the super-node and
/// takes the latest minimum cut toward the second terminal.
pub(crate) fn refine(
    g: &CapGraph,
    t: &mut PartitionTree,
    is_terminal: &[bool],
    cap: Option<u64>,
    meter: &Meter,
) -> Result<()> {
    let mut heavy: HashSet<(NodeId, NodeId)> = HashSet::new();
    let mut stack: Vec<usize> = (0..t.supers.len()).collect();
    while let Some(i) = stack.pop() {
        let mut terms: Vec<NodeId> = t.supers[i].iter().copied().filter(|&v| is_terminal[v]).collect();
        if terms.len() < 2 {
            continue;
        }
        terms.sort_unstable();
        let s = terms[0];
        let Some(&tt) = terms[1..].iter().find(|&&v| !heavy.contains(&(s, v))) else {
            continue;
        };
        let aux = build_auxiliary(t, g, i)?;
        let r = meter.flow(&aux.graph, aux.node_of[s], aux.node_of[tt], cap)?;
        let Some(side) = r.sink_side else {
            heavy.insert((s, tt));
            stack.push(i);
            continue;
        };
        let mut in_side = vec![false; aux.graph.n()];
        for &x in &side.members {
            in_side[x] = true;
        }
        let (moved, kept): (Vec<NodeId>, Vec<NodeId>) = t.supers[i].iter().partition(|&&v| in_side[aux.node_of[v]]);
        let j = t.supers.len();
        t.supers[i] = kept;
        t.supers.push(moved);
        for e in t.edges.iter_mut() {
            let nb = if e.0 == i {
                e.1
            } else if e.1 == i {
                e.0
            } else {
                continue;
            };
            if in_side[aux.node_of[t.supers[nb][0]]] {
                if e.0 == i {
                    e.0 = j;
                } else {
                    e.1 = j;
                }
            }
        }
        t.edges.push((i, j, r.value));
        stack.push(i);
        stack.push(j);
    }
    Ok(())
}

fn require_connected(g: &CapGraph) -> Result<()> {
    if g.n() == 0 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

fn singletons_to_tree(n: usize, t: PartitionTree) -> Result<GHTree> {
    let edges = t
        .edges
        .iter()
        .map(|&(i, j, w)| (t.supers[i][0], t.supers[j][0], w))
        .collect();
    GHTree::new(n, edges)
}

/// Classic Gomory-Hu: `n - 1` latest minimum cuts on auxiliary graphs.
pub fn gomory_hu_classic(g: &CapGraph) -> Result<GHTree> {
    gomory_hu_classic_metered(g, &Meter::new())
}

pub fn gomory_hu_classic_metered(g: &CapGraph, meter: &Meter) -> Result<GHTree> {
    require_connected(g)?;
    let mut t = PartitionTree::single(g.n());
    refine(g, &mut t, &vec![true; g.n()], None, meter)?;
    singletons_to_tree(g.n(), t)
}

/// Gusfield's algorithm: every cut is computed on `g` itself.
pub fn gusfield(g: &CapGraph) -> Result<GHTree> {
    gusfield_metered(g, &Meter::new())
}

pub fn gusfield_metered(g: &CapGraph, meter: &Meter) -> Result<GHTree> {
    require_connected(g)?;
    let n = g.n();
    let mut parent = vec![0usize; n];
    let mut weight = vec![0u64; n];
    for s in 1..n {
        let t = parent[s];
        let r = meter.flow(g, t, s, None)?;
        let side = r.sink_side.expect("uncapped flow is exact");
        let mut on_s = vec![false; n];
        for &x in &side.members {
            on_s[x] = true;
        }
        weight[s] = r.value;
        for i in 0..n {
            if i != s && on_s[i] && parent[i] == t {
                parent[i] = s;
            }
        }
        if on_s[parent[t]] && t != 0 {
            parent[s] = parent[t];
            parent[t] = s;
            weight.swap(s, t);
        }
    }
    let edges = (1..n).map(|v| (v, parent[v], weight[v])).collect();
    GHTree::new(n, edges)
}

/// A partition tree with exactly one node of `q` per super-node, exact for
/// every pair inside `q`.
pub fn partial_tree_for_subset(g: &CapGraph, q: &[NodeId]) -> Result<PartitionTree> {
    partial_tree_for_subset_metered(g, q, &Meter::new())
}

pub fn partial_tree_for_subset_metered(g: &CapGraph, q: &[NodeId], meter: &Meter) -> Result<PartitionTree> {
    if q.is_empty() {
        return Err(Error::EmptySet);
    }
    let is_q = crate::graph::membership(g.n(), q)?;
    let mut t = PartitionTree::single(g.n());
    refine(g, &mut t, &is_q, None, meter)?;
    Ok(t)
}

/// A partition tree separating every pair of connectivity at most `k`.
/// Pairs left in a common super-node have connectivity above `k`.
pub fn k_partial_tree(g: &CapGraph, k: u64) -> Result<PartitionTree> {
    k_partial_tree_metered(g, k, &Meter::new())
}

pub fn k_partial_tree_metered(g: &CapGraph, k: u64, meter: &Meter) -> Result<PartitionTree> {
    require_connected(g)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let mut t = PartitionTree::single(g.n());
    refine(g, &mut t, &vec![true; g.n()], Some(k + 1), meter)?;
    Ok(t)
}
