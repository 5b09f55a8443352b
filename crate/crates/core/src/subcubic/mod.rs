//! The recursive tree builder.
//!
//! After a `k`-partial tree splits off every pair of small connectivity,
//! each super-node is solved recursively. A random sample of core nodes is
//! resolved exactly; the super-node holding more than half of the core (if
//! any) gets a pivot from the sample and rounds of expander-guided queries
//! for the latest minimum cut from the pivot to every other core node. The
//! disjoint maximal cuts form a star, and every piece recurses again.
//!
//! Estimates that the rounds leave uncertified are re-queried by a repair
//! pass before any star is built, so the output is always exact.

mod membership;
mod params;
mod star;

use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::combine::stitch;
use crate::egq::{ceil_log2, egq_round, EgqContext, EstimateTable, Scales, WScale};
use crate::error::{Error, Result};
use crate::expander::{decompose_with, DecomposeOptions, ExpanderDecomposition, Phi};
use crate::gomory_hu::{k_partial_tree_metered, partial_tree_for_subset_metered};
use crate::graph::{CapGraph, NodeId};
use crate::meter::Meter;
use crate::seed;
use crate::sparsify::nagamochi_ibaraki;
use crate::tree::{GHTree, PartitionTree};

pub use membership::{cut_membership_tree, CutMembershipTree};
pub use params::{derive_params, AlgoParams, Derived, Profile};
pub use star::{
    assemble_star, pivot_select, repair_pass, sample_draws, Instance, PivotSelection, RepairStats, Star, StarMode,
};

/// Recursions into a piece with as many core nodes as its parent before
/// the piece is resolved directly.
const MAX_STALLS: usize = 3;

/// Instrumentation of one build.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BuildReport {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub k: u64,
    pub flow_calls_total: u64,
    pub flow_calls_preprocess: u64,
    pub flow_calls_repair: u64,
    pub repair_corrections: u64,
    pub isolating_calls: u64,
    pub recursion_depth: usize,
    /// `(w, φ_w, Σ δ(V_i) in G_w)` per scale.
    pub per_w_crossing_edges: Vec<(u64, Phi, u64)>,
    /// Per expander-guided phase: rounds until every estimate was certified,
    /// `None` if some never was.
    pub rounds_to_all_done: Vec<Option<usize>>,
    /// Certified and tracked estimates summed over all phases, after the
    /// last round and before repair.
    pub done_before_repair: (usize, usize),
    /// `|P|` per star.
    pub problematic: Vec<usize>,
    /// Stars with `|P| > r/2`.
    pub problematic_flagged: usize,
    /// `Σ |V(G_i)|` over the graphs at each recursion depth.
    pub level_nodes: Vec<usize>,
    /// Pieces resolved directly after stalling.
    pub fallbacks: usize,
}

impl BuildReport {
    /// Key-value records.
    pub fn records(&self) -> Vec<(&'static str, String)> {
        let list = |v: Vec<String>| v.join(",");
        vec![
            ("n", self.n.to_string()),
            ("m", self.m.to_string()),
            ("r", self.r.to_string()),
            ("k", self.k.to_string()),
            ("flow_calls_total", self.flow_calls_total.to_string()),
            ("flow_calls_preprocess", self.flow_calls_preprocess.to_string()),
            ("flow_calls_repair", self.flow_calls_repair.to_string()),
            ("repair_corrections", self.repair_corrections.to_string()),
            ("isolating_calls", self.isolating_calls.to_string()),
            ("recursion_depth", self.recursion_depth.to_string()),
            (
                "per_w_crossing_edges",
                list(
                    self.per_w_crossing_edges
                        .iter()
                        .map(|(w, _, c)| format!("{w}:{c}"))
                        .collect(),
                ),
            ),
            (
                "rounds_to_all_done",
                list(
                    self.rounds_to_all_done
                        .iter()
                        .map(|r| r.map_or("-".to_string(), |x| x.to_string()))
                        .collect(),
                ),
            ),
            (
                "done_before_repair",
                format!("{}/{}", self.done_before_repair.0, self.done_before_repair.1),
            ),
            (
                "problematic_max",
                self.problematic.iter().max().copied().unwrap_or(0).to_string(),
            ),
            ("problematic_flagged", self.problematic_flagged.to_string()),
            (
                "level_nodes",
                list(self.level_nodes.iter().map(|x| x.to_string()).collect()),
            ),
            ("fallbacks", self.fallbacks.to_string()),
        ]
    }
}

impl fmt::Display for BuildReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.records() {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Everything built once per input graph and shared by the recursion.
#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub derived: Derived,
    pub partial: PartitionTree,
    pub scales: Scales,
}

/// The `k`-partial tree and, per scale, the sparsifier `G_w` and its
/// expander decomposition.
pub fn preprocess(g: &CapGraph, params: &AlgoParams, meter: &Meter) -> Result<Preprocessed> {
    let derived = derive_params(g.n(), g.m(), params);
    let partial = k_partial_tree_metered(g, derived.k, meter)?;
    let scales = derived
        .scales
        .par_iter()
        .enumerate()
        .map(|(i, &(w, phi))| {
            let g_w = nagamochi_ibaraki(g, 2 * w);
            let dec = if params.singleton_decomposition {
                ExpanderDecomposition::singletons(&g_w)
            } else {
                let opts = DecomposeOptions {
                    seed: seed::derive(params.seed, 1 << 40 | i as u64),
                    ..Default::default()
                };
                decompose_with(&g_w, phi, &opts)?
            };
            WScale::new(&g_w, w, phi, dec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Preprocessed {
        derived,
        partial,
        scales: Scales {
            n: g.n(),
            degree: g.degrees(),
            scales,
        },
    })
}

#[derive(Default)]
struct Tally {
    repair_calls: u64,
    repair_corrections: u64,
    depth: usize,
    rounds: Vec<(Vec<NodeId>, Option<usize>)>,
    done: (usize, usize),
    problematic: Vec<usize>,
    level_nodes: Vec<usize>,
    fallbacks: usize,
}

struct Builder<'a> {
    params: &'a AlgoParams,
    pre: &'a Preprocessed,
    meter: &'a Meter,
    tally: Mutex<Tally>,
}

impl Builder<'_> {
    fn enter(&self, depth: usize, nodes: usize) {
        let mut t = self.tally.lock().expect("tally lock");
        t.depth = t.depth.max(depth);
        if t.level_nodes.len() <= depth {
            t.level_nodes.resize(depth + 1, 0);
        }
        t.level_nodes[depth] += nodes;
    }

    /// A tree over the instance: core nodes exact, every other node a leaf
    /// at the core node it belongs with.
    fn solve(&self, inst: &Instance, depth: usize, stall: usize, seed: u64) -> Result<GHTree> {
        self.enter(depth, inst.graph.n());
        let core = inst.core_nodes();
        if core.len() < self.pre.derived.r || stall >= MAX_STALLS {
            if stall >= MAX_STALLS {
                self.tally.lock().expect("tally lock").fallbacks += 1;
            }
            return self.resolve_directly(inst, &core);
        }
        let draws = sample_draws(core.len(), self.pre.derived.r, self.params.gamma, self.pre.scales.n);
        let sel = pivot_select(inst, draws, &mut seed::rng(seed, 0), self.meter)?;
        let t = &sel.tree;
        let big = {
            let cnt = t.supers[sel.largest].iter().filter(|&&x| inst.core[x]).count();
            (2 * cnt > core.len()).then_some(sel.largest)
        };
        let subtrees = (0..t.len())
            .into_par_iter()
            .map(|j| {
                let (child, aux) = inst.child(t, j)?;
                let child_seed = seed::derive(seed, 1 + j as u64);
                if Some(j) == big {
                    self.solve_residual(&child, aux.node_of[sel.pivot], depth, stall, child_seed)
                } else {
                    let s = next_stall(stall, core.len(), &child);
                    self.solve(&child, depth + 1, s, child_seed)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        leafy(inst, t, &subtrees)
    }

    fn resolve_directly(&self, inst: &Instance, core: &[NodeId]) -> Result<GHTree> {
        let t = partial_tree_for_subset_metered(&inst.graph, core, self.meter)?;
        let rep: Vec<NodeId> = t
            .supers
            .iter()
            .map(|s| *s.iter().find(|&&x| inst.core[x]).expect("one core node per super-node"))
            .collect();
        let of = t.super_of(inst.graph.n());
        let mut edges: Vec<(NodeId, NodeId, u64)> = t.edges.iter().map(|&(i, j, w)| (rep[i], rep[j], w)).collect();
        for x in 0..inst.graph.n() {
            if !inst.core[x] {
                edges.push((x, rep[of[x]], inst.graph.degree(x)));
            }
        }
        GHTree::new(inst.graph.n(), edges)
    }

    /// The super-node with more than half of the core: rounds of queries
    /// from the pivot, then a star of latest cuts.
    fn solve_residual(&self, inst: &Instance, pivot: NodeId, depth: usize, stall: usize, seed: u64) -> Result<GHTree> {
        let g = &inst.graph;
        let (mut est, all_done) = query_rounds(self.pre, self.params, inst, pivot, seed, self.meter)?;
        let tracked = est.nodes().count();
        let done = est.done_count();
        if let Some(f) = self.params.corrupt {
            f(&mut est);
        }
        let mode = if self.params.repair {
            let stats = repair_pass(g, &mut est, self.meter)?;
            let mut t = self.tally.lock().expect("tally lock");
            t.repair_corrections += stats.corrections;
            t.repair_calls += stats.calls;
            StarMode::Strict
        } else {
            StarMode::Trusting
        };
        let star = assemble_star(g, &inst.core, &est, mode)?;
        {
            let mut t = self.tally.lock().expect("tally lock");
            let key: Vec<NodeId> = inst.origin[pivot].clone();
            t.rounds.push((key, all_done));
            t.done.0 += done;
            t.done.1 += tracked;
            t.problematic.push(star.problematic.len());
        }
        let n_core = inst.core.iter().filter(|&&c| c).count();
        let t = &star.tree;
        let subtrees = (0..t.len())
            .into_par_iter()
            .map(|j| {
                let (child, _) = inst.child(t, j)?;
                let s = next_stall(stall, n_core, &child);
                self.solve(&child, depth + 1, s, seed::derive(seed, 1 << 32 | j as u64))
            })
            .collect::<Result<Vec<_>>>()?;
        leafy(inst, t, &subtrees)
    }
}

/// Fresh estimates for every core node of `inst` except `pivot`, refined by
/// up to `⌈log₂ N⌉ + 2` rounds of expander-guided queries. Stops early once
/// every estimate is certified and reports after how many rounds.
pub fn query_rounds(
    pre: &Preprocessed,
    params: &AlgoParams,
    inst: &Instance,
    pivot: NodeId,
    seed: u64,
    meter: &Meter,
) -> Result<(EstimateTable, Option<usize>)> {
    let g = &inst.graph;
    let mut est = EstimateTable::new(g, pivot, &inst.core);
    if est.all_done() {
        return Ok((est, Some(0)));
    }
    let mut ctx = EgqContext::new(
        g,
        &inst.origin,
        &inst.core,
        pivot,
        &pre.scales,
        pre.derived.r,
        params.gamma,
    );
    let rounds = ceil_log2(pre.scales.n as u64) as usize + 2;
    for round in 0..rounds {
        egq_round(&mut ctx, &mut est, seed::derive(seed, round as u64), meter)?;
        if est.all_done() {
            return Ok((est, Some(round + 1)));
        }
    }
    Ok((est, None))
}

fn next_stall(stall: usize, parent_core: usize, child: &Instance) -> usize {
    if child.core.iter().filter(|&&c| c).count() >= parent_core {
        stall + 1
    } else {
        0
    }
}

/// Stitches subtrees over a partition of the instance and hangs every
/// non-core node off the core node that owns it.
fn leafy(inst: &Instance, t: &PartitionTree, subtrees: &[GHTree]) -> Result<GHTree> {
    let n = inst.graph.n();
    let st = stitch(t, n, subtrees, &inst.core)?;
    let mut edges = st.edges;
    for x in 0..n {
        if !inst.core[x] {
            edges.push((x, st.owner[x], inst.graph.degree(x)));
        }
    }
    GHTree::new(n, edges)
}

/// Builds a cut-equivalent tree of a simple connected graph.
pub fn build_tree(g: &CapGraph, params: &AlgoParams) -> Result<(GHTree, BuildReport)> {
    build_tree_metered(g, params, &Meter::new())
}

pub fn build_tree_metered(g: &CapGraph, params: &AlgoParams, meter: &Meter) -> Result<(GHTree, BuildReport)> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if params.gamma == 0 {
        return Err(Error::InvalidParameter("gamma must be positive".into()));
    }
    let start = meter.snapshot();
    if g.n() == 1 {
        return Ok((
            GHTree::new(1, vec![])?,
            BuildReport {
                n: 1,
                level_nodes: vec![1],
                ..Default::default()
            },
        ));
    }
    let pre = preprocess(g, params, meter)?;
    let after_pre = meter.snapshot();
    let b = Builder {
        params,
        pre: &pre,
        meter,
        tally: Mutex::new(Tally::default()),
    };
    b.enter(0, g.n());
    let root = Instance::root(g);
    let t = &pre.partial;
    let subtrees = (0..t.len())
        .into_par_iter()
        .map(|i| {
            let (child, _) = root.child(t, i)?;
            b.solve(&child, 1, 0, seed::derive(params.seed, i as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    let tree = leafy(&root, t, &subtrees)?;
    let end = meter.snapshot();
    let mut tally = b.tally.into_inner().expect("tally lock");
    tally.rounds.sort();
    tally.problematic.sort_unstable();
    let r = pre.derived.r;
    let report = BuildReport {
        n: g.n(),
        m: g.m(),
        r,
        k: pre.derived.k,
        flow_calls_total: (end - start).flow_calls,
        flow_calls_preprocess: (after_pre - start).flow_calls,
        flow_calls_repair: tally.repair_calls,
        repair_corrections: tally.repair_corrections,
        isolating_calls: (end - start).isolating_calls,
        recursion_depth: tally.depth,
        per_w_crossing_edges: pre
            .scales
            .scales
            .iter()
            .map(|s| (s.w, s.phi, s.decomposition.crossing_edges))
            .collect(),
        rounds_to_all_done: tally.rounds.into_iter().map(|(_, r)| r).collect(),
        done_before_repair: tally.done,
        problematic_flagged: tally.problematic.iter().filter(|&&p| 2 * p > r).count(),
        problematic: tally.problematic,
        level_nodes: tally.level_nodes,
        fallbacks: tally.fallbacks,
    };
    Ok((tree, report))
}
