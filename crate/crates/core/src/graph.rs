//! Undirected capacitated multigraphs, cut arithmetic and contraction.
//!
//! [`CapGraph`] is the carrier for the input graph, for sparsifiers and for
//! every contracted auxiliary graph built along the way. Parallel edges are
//! merged into a single edge whose capacity is the sum, so a graph is
//! `simple` exactly when every stored capacity is one.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::tree::PartitionTree;

/// Dense node index in `0..n`.
pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub cap: u64,
}

impl Edge {
    /// The endpoint of this edge that is not `x`.
    #[inline]
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapGraph {
    n: usize,
    edges: Vec<Edge>,
    /// `(neighbor, edge index)` per node, in edge insertion order.
    adj: Vec<Vec<(NodeId, usize)>>,
    simple: bool,
    total_cap: u64,
}

impl CapGraph {
    /// A graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        CapGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            simple: true,
            total_cap: 0,
        }
    }

    /// Builds a graph from `(u, v, cap)` triples.
    ///
    /// Parallel edges are merged (capacities summed) at the position of their
    /// first occurrence. Self-loops and zero capacities are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, u64)>,
    {
        let mut index: HashMap<(NodeId, NodeId), usize> = HashMap::new();
        let mut list: Vec<Edge> = Vec::new();
        for (u, v, cap) in edges {
            check_node(u, n)?;
            check_node(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if cap == 0 {
                return Err(Error::ZeroCapacity(u, v));
            }
            let key = (u.min(v), u.max(v));
            match index.get(&key) {
                Some(&i) => list[i].cap += cap,
                None => {
                    index.insert(key, list.len());
                    list.push(Edge { u, v, cap });
                }
            }
        }
        Ok(Self::from_merged(n, list))
    }

    /// Unit-capacity graph from an edge list.
    pub fn from_unit_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1)))
    }

    pub(crate) fn from_merged(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut total_cap = 0;
        let mut simple = true;
        for (i, e) in edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
            total_cap += e.cap;
            simple &= e.cap == 1;
        }
        CapGraph {
            n,
            edges,
            adj,
            simple,
            total_cap,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored (merged) edges.
    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, usize)] {
        &self.adj[v]
    }

    #[inline]
    pub fn is_simple(&self) -> bool {
        self.simple
    }

    #[inline]
    pub fn total_cap(&self) -> u64 {
        self.total_cap
    }

    /// Capacitated degree of `v`.
    pub fn degree(&self, v: NodeId) -> u64 {
        self.adj[v].iter().map(|&(_, e)| self.edges[e].cap).sum()
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.u] += e.cap;
            d[e.v] += e.cap;
        }
        d
    }

    /// Capacity between `u` and `v` (zero when not adjacent).
    pub fn cap_between(&self, u: NodeId, v: NodeId) -> u64 {
        self.adj[u]
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, e)| self.edges[e].cap)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for &(y, _) in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }
}

#[inline]
pub(crate) fn check_node(v: NodeId, n: usize) -> Result<()> {
    if v < n {
        Ok(())
    } else {
        Err(Error::NodeOutOfRange { node: v, n })
    }
}

/// Indicator vector for a node set, validating every index.
pub fn membership(n: usize, s: &[NodeId]) -> Result<Vec<bool>> {
    let mut m = vec![false; n];
    for &v in s {
        check_node(v, n)?;
        m[v] = true;
    }
    Ok(m)
}

/// One side of a cut together with its value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutSide {
    /// Sorted, duplicate-free.
    pub members: Vec<NodeId>,
    pub value: u64,
}

impl CutSide {
    pub fn new(mut members: Vec<NodeId>, value: u64) -> Self {
        members.sort_unstable();
        members.dedup();
        CutSide { members, value }
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Sum of capacities of edges with exactly one endpoint in `s`.
pub fn cut_value(g: &CapGraph, s: &[NodeId]) -> Result<u64> {
    let inside = membership(g.n(), s)?;
    Ok(cut_value_mask(g, &inside))
}

/// [`cut_value`] for an indicator vector.
pub fn cut_value_mask(g: &CapGraph, inside: &[bool]) -> u64 {
    g.edges()
        .iter()
        .filter(|e| inside[e.u] != inside[e.v])
        .map(|e| e.cap)
        .sum()
}

/// Capacitated degree of every node of `s` (in the order given) and their sum.
pub fn degree_and_volume(g: &CapGraph, s: &[NodeId]) -> Result<(Vec<u64>, u64)> {
    for &v in s {
        check_node(v, g.n())?;
    }
    let degs: Vec<u64> = s.iter().map(|&v| g.degree(v)).collect();
    let vol = degs.iter().sum();
    Ok((degs, vol))
}

/// A contracted copy of some host graph.
///
/// Node ids `0..core.len()` are the un-contracted host nodes in increasing
/// order; contracted nodes follow, ordered by the smallest host node they
/// contain.
#[derive(Clone, Debug)]
pub struct AuxiliaryGraph {
    pub graph: CapGraph,
    /// Host ids of the un-contracted nodes.
    pub core: Vec<NodeId>,
    /// Host nodes represented by each auxiliary node (sorted).
    pub origin: Vec<Vec<NodeId>>,
    /// Auxiliary node of each host node.
    pub node_of: Vec<NodeId>,
}

impl AuxiliaryGraph {
    #[inline]
    pub fn is_core(&self, x: NodeId) -> bool {
        x < self.core.len()
    }

    /// Host nodes represented by a set of auxiliary nodes, sorted.
    pub fn expand(&self, nodes: &[NodeId]) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = nodes.iter().flat_map(|&x| self.origin[x].iter().copied()).collect();
        out.sort_unstable();
        out
    }
}

/// Merges each group into one node. Edges inside a group vanish and
/// parallel edges created by the merge are summed.
pub fn contract(g: &CapGraph, groups: &[Vec<NodeId>]) -> Result<AuxiliaryGraph> {
    const FREE: usize = usize::MAX;
    let n = g.n();
    let mut group_of = vec![FREE; n];
    for (gi, grp) in groups.iter().enumerate() {
        for &v in grp {
            check_node(v, n)?;
            if group_of[v] != FREE {
                if group_of[v] == gi {
                    continue;
                }
                return Err(Error::OverlappingGroups(v));
            }
            group_of[v] = gi;
        }
    }

    let core: Vec<NodeId> = (0..n).filter(|&v| group_of[v] == FREE).collect();
    let mut order: Vec<(NodeId, usize)> = groups
        .iter()
        .enumerate()
        .filter_map(|(gi, grp)| grp.iter().min().map(|&lo| (lo, gi)))
        .collect();
    order.sort_unstable();

    let mut node_of = vec![0; n];
    let mut origin: Vec<Vec<NodeId>> = Vec::with_capacity(core.len() + order.len());
    for (i, &v) in core.iter().enumerate() {
        node_of[v] = i;
        origin.push(vec![v]);
    }
    let mut slot_of_group = vec![FREE; groups.len()];
    for (k, &(_, gi)) in order.iter().enumerate() {
        slot_of_group[gi] = core.len() + k;
        let mut members = groups[gi].clone();
        members.sort_unstable();
        members.dedup();
        origin.push(members);
    }
    for v in 0..n {
        if group_of[v] != FREE {
            node_of[v] = slot_of_group[group_of[v]];
        }
    }

    let graph = contract_edges(g, &node_of, origin.len());
    Ok(AuxiliaryGraph {
        graph,
        core,
        origin,
        node_of,
    })
}

/// Maps every edge through `node_of`, dropping loops and merging parallels.
pub(crate) fn contract_edges(g: &CapGraph, node_of: &[NodeId], count: usize) -> CapGraph {
    let mut index: HashMap<(NodeId, NodeId), usize> = HashMap::new();
    let mut list: Vec<Edge> = Vec::new();
    for e in g.edges() {
        let (a, b) = (node_of[e.u], node_of[e.v]);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        match index.get(&key) {
            Some(&i) => list[i].cap += e.cap,
            None => {
                index.insert(key, list.len());
                list.push(Edge { u: a, v: b, cap: e.cap });
            }
        }
    }
    CapGraph::from_merged(count, list)
}

/// The auxiliary graph of super-node `i`: every connected component of the
/// tree minus `i` is merged into a single node.
pub fn build_auxiliary(t: &PartitionTree, g: &CapGraph, i: usize) -> Result<AuxiliaryGraph> {
    if i >= t.supers.len() {
        return Err(Error::InvalidSuperNode {
            id: i,
            count: t.supers.len(),
        });
    }
    let groups = t
        .components_without(i)
        .into_iter()
        .map(|comp| {
            comp.into_iter()
                .flat_map(|j| t.supers[j].iter().copied())
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    contract(g, &groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> CapGraph {
        CapGraph::from_unit_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn cycle(n: usize) -> CapGraph {
        CapGraph::from_unit_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn k4_cut_values() {
        let g = k4();
        assert_eq!(cut_value(&g, &[0, 1]).unwrap(), 4);
        assert_eq!(cut_value(&g, &[0, 1, 2, 3]).unwrap(), 0);
        assert_eq!(cut_value(&g, &[]).unwrap(), 0);
    }

    #[test]
    fn out_of_range_node_is_rejected() {
        let g = k4();
        assert_eq!(cut_value(&g, &[7]), Err(Error::NodeOutOfRange { node: 7, n: 4 }));
        assert!(degree_and_volume(&g, &[4]).is_err());
    }

    #[test]
    fn degrees_and_volumes() {
        let (d, vol) = degree_and_volume(&k4(), &[0]).unwrap();
        assert_eq!((d, vol), (vec![3], 3));
        let (_, vol) = degree_and_volume(&cycle(6), &[2, 3, 4]).unwrap();
        assert_eq!(vol, 6);
    }

    #[test]
    fn parallel_edges_merge_and_clear_simple_flag() {
        let g = CapGraph::from_unit_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.cap_between(0, 1), 2);
        assert!(!g.is_simple());
        assert_eq!(g.total_cap(), 3);
        assert!(k4().is_simple());
    }

    #[test]
    fn rejects_loops_and_zero_caps() {
        assert_eq!(CapGraph::from_unit_edges(2, [(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(CapGraph::from_edges(2, [(0, 1, 0)]), Err(Error::ZeroCapacity(0, 1)));
    }

    #[test]
    fn contract_path_prefix() {
        let g = CapGraph::from_unit_edges(3, [(0, 1), (1, 2)]).unwrap();
        let aux = contract(&g, &[vec![0, 1]]).unwrap();
        assert_eq!(aux.graph.n(), 2);
        assert_eq!(aux.graph.m(), 1);
        assert_eq!(aux.graph.edges()[0].cap, 1);
        assert_eq!(aux.core, vec![2]);
        assert_eq!(aux.origin, vec![vec![2], vec![0, 1]]);
    }

    #[test]
    fn contract_k4_halves() {
        let aux = contract(&k4(), &[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(aux.graph.n(), 2);
        assert_eq!(aux.graph.cap_between(0, 1), 4);
        assert!(!aux.graph.is_simple());
        assert!(aux.core.is_empty());
    }

    #[test]
    fn contract_orders_groups_by_smallest_member() {
        let g = cycle(6);
        let aux = contract(&g, &[vec![5, 4], vec![1, 0]]).unwrap();
        assert_eq!(aux.core, vec![2, 3]);
        assert_eq!(aux.origin[2], vec![0, 1]);
        assert_eq!(aux.origin[3], vec![4, 5]);
        assert_eq!(aux.node_of[4], 3);
    }

    #[test]
    fn overlapping_groups_rejected() {
        assert_eq!(
            contract(&k4(), &[vec![0, 1], vec![1, 2]]).unwrap_err(),
            Error::OverlappingGroups(1)
        );
    }

    #[test]
    fn build_auxiliary_single_super_is_identity() {
        let g = k4();
        let t = PartitionTree::single(4);
        let aux = build_auxiliary(&t, &g, 0).unwrap();
        assert_eq!(aux.graph, g);
        assert_eq!(aux.core, vec![0, 1, 2, 3]);
    }

    #[test]
    fn build_auxiliary_middle_of_path_tree() {
        let g = cycle(6);
        let t = PartitionTree {
            supers: vec![vec![0, 1], vec![2, 3], vec![4, 5]],
            edges: vec![(0, 1, 2), (1, 2, 2)],
            gh_equivalent: true,
        };
        let aux = build_auxiliary(&t, &g, 1).unwrap();
        assert_eq!(aux.graph.n(), 4);
        assert_eq!(aux.core, vec![2, 3]);
        assert_eq!(aux.origin[2], vec![0, 1]);
        assert_eq!(aux.origin[3], vec![4, 5]);
        assert!(matches!(
            build_auxiliary(&t, &g, 3),
            Err(Error::InvalidSuperNode { id: 3, count: 3 })
        ));
    }
}
