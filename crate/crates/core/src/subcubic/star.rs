//! Instances of the recursion, pivot sampling, the repair pass and star
//! assembly.

use rand::Rng;

use crate::egq::{Estimate, EstimateTable};
use crate::error::{Error, Result};
use crate::gomory_hu::partial_tree_for_subset_metered;
use crate::graph::{build_auxiliary, cut_value, AuxiliaryGraph, CapGraph, NodeId};
use crate::meter::Meter;
use crate::tree::PartitionTree;

/// A graph of the recursion. Core nodes are single original nodes whose
/// tree edges are still to be found; every other node is a contracted
/// remainder or a node resolved elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: CapGraph,
    /// Original nodes behind each node.
    pub origin: Vec<Vec<NodeId>>,
    pub core: Vec<bool>,
}

impl Instance {
    pub fn root(g: &CapGraph) -> Self {
        Instance {
            graph: g.clone(),
            origin: (0..g.n()).map(|v| vec![v]).collect(),
            core: vec![true; g.n()],
        }
    }

    pub fn core_nodes(&self) -> Vec<NodeId> {
        (0..self.graph.n()).filter(|&x| self.core[x]).collect()
    }

    /// The auxiliary graph of super-node `i`, as an instance.
    pub fn child(&self, t: &PartitionTree, i: usize) -> Result<(Instance, AuxiliaryGraph)> {
        let aux = build_auxiliary(t, &self.graph, i)?;
        let origin = aux
            .origin
            .iter()
            .map(|hs| {
                let mut o: Vec<NodeId> = hs.iter().flat_map(|&h| self.origin[h].iter().copied()).collect();
                o.sort_unstable();
                o
            })
            .collect();
        let core = (0..aux.graph.n())
            .map(|x| aux.is_core(x) && self.core[aux.core[x]])
            .collect();
        Ok((
            Instance {
                graph: aux.graph.clone(),
                origin,
                core,
            },
            aux,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotSelection {
    /// Distinct sampled core nodes, sorted.
    pub sample: Vec<NodeId>,
    /// Partial tree with one sampled node per super-node.
    pub tree: PartitionTree,
    /// Super-node with the most core nodes.
    pub largest: usize,
    /// The sampled node of `largest`.
    pub pivot: NodeId,
}

/// Number of draws for `n_core` core nodes.
pub fn sample_draws(n_core: usize, r: usize, gamma: u32, n_orig: usize) -> usize {
    let ln = (n_orig.max(2) as f64).ln();
    (n_core as f64 / r as f64 * (gamma as f64 + 2.0) * ln).ceil() as usize + 1
}

/// Samples core nodes with replacement and splits the instance by a partial
/// tree on the sample.
pub fn pivot_select(inst: &Instance, draws: usize, rng: &mut impl Rng, meter: &Meter) -> Result<PivotSelection> {
    let core = inst.core_nodes();
    if core.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut sample: Vec<NodeId> = (0..draws.max(1)).map(|_| core[rng.gen_range(0..core.len())]).collect();
    sample.sort_unstable();
    sample.dedup();
    let tree = partial_tree_for_subset_metered(&inst.graph, &sample, meter)?;
    let counts: Vec<usize> = tree
        .supers
        .iter()
        .map(|s| s.iter().filter(|&&x| inst.core[x]).count())
        .collect();
    let largest = (0..counts.len())
        .max_by_key(|&i| (counts[i], std::cmp::Reverse(i)))
        .expect("at least one super-node");
    let pivot = *tree.supers[largest]
        .iter()
        .find(|x| sample.binary_search(x).is_ok())
        .expect("one sampled node per super-node");
    Ok(PivotSelection {
        sample,
        tree,
        largest,
        pivot,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RepairStats {
    pub calls: u64,
    /// Entries whose cut changed.
    pub corrections: u64,
}

/// Queries every entry that is not done or whose cut fails a consistency
/// check. Afterwards every entry holds its latest minimum cut.
pub fn repair_pass(graph: &CapGraph, est: &mut EstimateTable, meter: &Meter) -> Result<RepairStats> {
    let p = est.pivot();
    let mut stats = RepairStats::default();
    let nodes: Vec<NodeId> = est.nodes().collect();
    for v in nodes {
        let e = est.get(v).expect("tracked");
        let side = &e.testify;
        let consistent = e.done
            && side.contains(v)
            && !side.contains(p)
            && cut_value(graph, &side.members).is_ok_and(|c| c == side.value);
        if consistent {
            continue;
        }
        stats.calls += 1;
        let exact = meter
            .flow(graph, p, v, None)?
            .sink_side
            .expect("uncapped flows are exact");
        if exact != *side {
            stats.corrections += 1;
        }
        est.set_unchecked(
            v,
            Estimate {
                testify: exact,
                done: true,
            },
        );
    }
    Ok(stats)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarMode {
    /// Every entry must be done.
    Strict,
    /// Entries are used as they are.
    Trusting,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    /// Super-node 0 is the center `P'`; super-node `i` holds the cut of
    /// `centers[i - 1]`.
    pub tree: PartitionTree,
    pub centers: Vec<NodeId>,
    /// Nodes whose cut holds more than half of the core.
    pub problematic: Vec<NodeId>,
}

/// Builds the star of disjoint latest cuts around the pivot.
pub fn assemble_star(graph: &CapGraph, core: &[bool], est: &EstimateTable, mode: StarMode) -> Result<Star> {
    let n = graph.n();
    let n_core = core.iter().filter(|&&c| c).count();
    let mut order: Vec<(usize, NodeId)> = Vec::new();
    for v in est.nodes() {
        let e = est.get(v).expect("tracked");
        if mode == StarMode::Strict && !e.done {
            return Err(Error::UndoneNode(v));
        }
        let size = e.testify.members.iter().filter(|&&x| core[x]).count();
        order.push((size, v));
    }
    order.sort_by_key(|&(size, v)| (std::cmp::Reverse(size), v));
    let mut problematic = Vec::new();
    let mut taken = vec![false; n];
    let mut supers: Vec<Vec<NodeId>> = vec![Vec::new()];
    let mut edges = Vec::new();
    let mut centers = Vec::new();
    for (size, v) in order {
        if 2 * size > n_core {
            problematic.push(v);
            continue;
        }
        let side = &est.get(v).expect("tracked").testify;
        if side.members.iter().any(|&x| taken[x]) {
            continue;
        }
        for &x in &side.members {
            taken[x] = true;
        }
        edges.push((0, supers.len(), side.value));
        supers.push(side.members.clone());
        centers.push(v);
    }
    supers[0] = (0..n).filter(|&x| !taken[x]).collect();
    problematic.sort_unstable();
    let tree = PartitionTree {
        supers,
        edges,
        gh_equivalent: true,
    };
    tree.validate(n)?;
    Ok(Star {
        tree,
        centers,
        problematic,
    })
}
