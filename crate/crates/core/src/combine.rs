//! Stitching cut-equivalent trees of auxiliary graphs into one tree.

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::tree::{Dsu, GHTree, PartitionTree};

/// Collapses every node outside `is_q` into a neighbor of a tree.
///
/// Edges are taken heaviest first; an edge is contracted whenever one of its
/// two blobs has no `q` node yet. Contracting the heaviest edge at a node
/// off every `q`-to-`q` path minimum leaves those minima and the bipartitions
/// of the surviving edges unchanged.
///
/// Returns the surviving edges (endpoints replaced by blob owners) and the
/// owning `q` node of every node.
pub(crate) fn collapse_to(
    n: usize,
    edges: &[(NodeId, NodeId, u64)],
    is_q: impl Fn(NodeId) -> bool,
) -> Result<(Vec<(NodeId, NodeId, u64)>, Vec<NodeId>)> {
    let mut dsu = Dsu::new(n);
    let mut owner: Vec<Option<NodeId>> = (0..n).map(|x| is_q(x).then_some(x)).collect();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(edges[i].2));
    let mut keep = Vec::new();
    for i in order {
        let (u, v, _) = edges[i];
        let (a, b) = (dsu.find(u), dsu.find(v));
        if owner[a].is_some() && owner[b].is_some() {
            keep.push(i);
            continue;
        }
        let o = owner[a].or(owner[b]);
        dsu.union(a, b);
        let r = dsu.find(a);
        owner[r] = o;
    }
    let mut own = Vec::with_capacity(n);
    for x in 0..n {
        let r = dsu.find(x);
        match owner[r] {
            Some(q) => own.push(q),
            None => return Err(Error::EmptySet),
        }
    }
    keep.sort_unstable();
    let kept = keep
        .into_iter()
        .map(|i| {
            let (u, v, w) = edges[i];
            (own[u], own[v], w)
        })
        .collect();
    Ok((kept, own))
}

/// Result of stitching where only some host nodes need exact answers.
#[derive(Clone, Debug)]
pub(crate) struct Stitched {
    /// Tree edges among the `q` nodes of the host.
    pub edges: Vec<(NodeId, NodeId, u64)>,
    /// For every host node, the `q` node it is attached to.
    pub owner: Vec<NodeId>,
}

/// Auxiliary-graph ids of the contracted node that holds each neighbor of
/// super-node `i`, keyed by neighbor index.
pub(crate) fn contracted_ids(t: &PartitionTree, i: usize) -> Vec<(usize, NodeId)> {
    let comps = t.components_without(i);
    let mut lows: Vec<(NodeId, usize)> = comps
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let lo = comp
                .iter()
                .flat_map(|&j| t.supers[j].iter().copied())
                .min()
                .expect("super-nodes are non-empty");
            (lo, c)
        })
        .collect();
    lows.sort_unstable();
    let base = t.supers[i].len();
    let mut out = vec![(0, 0); comps.len()];
    for (k, &(_, c)) in lows.iter().enumerate() {
        out[c] = (comps[c][0], base + k);
    }
    out
}

pub(crate) fn stitch(t: &PartitionTree, n: usize, subtrees: &[GHTree], is_q: &[bool]) -> Result<Stitched> {
    if subtrees.len() != t.supers.len() {
        return Err(Error::InvalidPartitionTree(format!(
            "{} subtrees for {} super-nodes",
            subtrees.len(),
            t.supers.len()
        )));
    }
    let mut edges = Vec::with_capacity(n);
    let mut owner = vec![usize::MAX; n];
    // attach[i]: (neighbor super, host node owning that neighbor's side in T_i)
    let mut attach: Vec<Vec<(usize, NodeId)>> = Vec::with_capacity(t.supers.len());
    for (i, sub) in subtrees.iter().enumerate() {
        let mut core = t.supers[i].clone();
        core.sort_unstable();
        let ids = contracted_ids(t, i);
        if sub.n() != core.len() + ids.len() {
            return Err(Error::SubtreeMismatch(i));
        }
        let (kept, own) = collapse_to(sub.n(), sub.edges(), |x| x < core.len() && is_q[core[x]])
            .map_err(|_| Error::SubtreeMismatch(i))?;
        edges.extend(kept.into_iter().map(|(a, b, w)| (core[a], core[b], w)));
        for (x, &v) in core.iter().enumerate() {
            owner[v] = core[own[x]];
        }
        attach.push(ids.into_iter().map(|(j, x)| (j, core[own[x]])).collect());
    }
    for &(i, j, w) in &t.edges {
        let find = |a: usize, b: usize| {
            attach[a]
                .iter()
                .find(|&&(nb, _)| nb == b)
                .map(|&(_, h)| h)
                .expect("tree edge endpoints are neighbors")
        };
        edges.push((find(i, j), find(j, i), w));
    }
    Ok(Stitched { edges, owner })
}

/// Builds a full cut-equivalent tree from a GH-equivalent partition tree and
/// a cut-equivalent tree of every auxiliary graph (indexed by super-node,
/// over the node ids produced by [`crate::graph::build_auxiliary`]).
pub fn combine(t: &PartitionTree, subtrees: &[GHTree]) -> Result<GHTree> {
    let n: usize = t.supers.iter().map(Vec::len).sum();
    let s = stitch(t, n, subtrees, &vec![true; n])?;
    GHTree::new(n, s.edges)
}
