//! Expander-guided querying: one round of refining single-source cut
//! estimates inside an auxiliary graph, steered by expander decompositions
//! of sparsified copies of the original graph.
//!
//! For every scale `w` the round targets nodes whose connectivity to the
//! pivot lies in `[w, 2w)`. Guesses `(x, x', y, y')` for the sizes of the two
//! sides of such a node's cut inside its expander pick one of three
//! strategies: random isolating-cuts calls, direct queries to the nodes with
//! the highest estimates, or direct queries to every relevant node of a small
//! expander with many outgoing edges.
//!
//! A direct query that comes back below `2w` yields the latest minimum cut
//! and marks the node done. Isolating-cuts results only lower estimates: they
//! are exact for isolated terminals, but which terminals were isolated is not
//! observable, so they never mark a node done.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;

use crate::error::Result;
use crate::expander::{ExpanderDecomposition, Phi};
use crate::graph::{cut_value, CapGraph, CutSide, NodeId};
use crate::isolating::{isolating_cuts_with, SplitMode};
use crate::meter::{Meter, MeterSnapshot};
use crate::seed;
use crate::sparsify::nagamochi_ibaraki;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Estimate {
    /// A `(p, v)`-cut whose value is the current estimate `c'(v)`.
    pub testify: CutSide,
    /// Set once `testify` is known to be the latest minimum cut.
    pub done: bool,
}

/// Estimates for every core node of an auxiliary graph other than the pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimateTable {
    pivot: NodeId,
    entries: Vec<Option<Estimate>>,
}

fn candidate_key(s: &CutSide) -> (u64, usize, &[NodeId]) {
    (s.value, s.members.len(), &s.members)
}

impl EstimateTable {
    /// Every tracked node starts at its singleton cut. For a core node of an
    /// auxiliary graph of a simple graph this is its degree in that graph.
    pub fn new(graph: &CapGraph, pivot: NodeId, core: &[bool]) -> Self {
        let entries = (0..graph.n())
            .map(|v| {
                (core[v] && v != pivot).then(|| Estimate {
                    testify: CutSide::new(vec![v], graph.degree(v)),
                    done: false,
                })
            })
            .collect();
        EstimateTable { pivot, entries }
    }

    pub fn pivot(&self) -> NodeId {
        self.pivot
    }

    pub fn get(&self, v: NodeId) -> Option<&Estimate> {
        self.entries.get(v).and_then(Option::as_ref)
    }

    pub fn c_prime(&self, v: NodeId) -> Option<u64> {
        self.get(v).map(|e| e.testify.value)
    }

    pub fn is_done(&self, v: NodeId) -> bool {
        self.get(v).is_some_and(|e| e.done)
    }

    /// Tracked nodes in increasing order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(v, e)| e.as_ref().map(|_| v))
    }

    pub fn done_count(&self) -> usize {
        self.entries.iter().flatten().filter(|e| e.done).count()
    }

    pub fn all_done(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.done)
    }

    /// Records the exact latest cut of `v`. Returns whether the estimate
    /// value dropped.
    pub fn offer_exact(&mut self, v: NodeId, side: CutSide) -> bool {
        let Some(e) = self.entries[v].as_mut() else {
            return false;
        };
        if e.done {
            return false;
        }
        let dropped = side.value < e.testify.value;
        e.testify = side;
        e.done = true;
        dropped
    }

    /// Marks `v` done without changing its cut.
    pub fn certify(&mut self, v: NodeId) {
        if let Some(e) = self.entries[v].as_mut() {
            e.done = true;
        }
    }

    /// Keeps `side` if it beats the current cut by value, then size, then
    /// members. Never touches done nodes. Returns whether the value dropped.
    pub fn offer_candidate(&mut self, v: NodeId, side: CutSide) -> bool {
        let Some(e) = self.entries[v].as_mut() else {
            return false;
        };
        if e.done || candidate_key(&side) >= candidate_key(&e.testify) {
            return false;
        }
        let dropped = side.value < e.testify.value;
        e.testify = side;
        dropped
    }

    /// Overwrites an entry without any check.
    pub fn set_unchecked(&mut self, v: NodeId, est: Estimate) {
        self.entries[v] = Some(est);
    }
}

/// One scale of the preprocessing: `G_w` decomposed with parameter `φ_w`.
#[derive(Clone, Debug)]
pub struct WScale {
    pub w: u64,
    pub phi: Phi,
    pub decomposition: ExpanderDecomposition,
    /// Cluster index of every original node.
    pub cluster_of: Vec<usize>,
    /// `δ(H)` in `G_w` per cluster.
    pub cluster_cut: Vec<u64>,
}

impl WScale {
    pub fn new(g_w: &CapGraph, w: u64, phi: Phi, decomposition: ExpanderDecomposition) -> Result<Self> {
        let cluster_of = decomposition.cluster_of(g_w.n());
        let cluster_cut = decomposition
            .clusters
            .iter()
            .map(|c| cut_value(g_w, c))
            .collect::<Result<_>>()?;
        Ok(WScale {
            w,
            phi,
            decomposition,
            cluster_of,
            cluster_cut,
        })
    }
}

/// What every auxiliary graph shares: degrees and scales of the original
/// graph.
#[derive(Clone, Debug)]
pub struct Scales {
    /// Node count `N` of the original graph.
    pub n: usize,
    pub degree: Vec<u64>,
    pub scales: Vec<WScale>,
}

/// `w = 2^j` for `⌊log₂ k⌋ ≤ j ≤ ⌈log₂ N⌉`.
pub fn w_range(k: u64, n: usize) -> Vec<u64> {
    let lo = 63 - k.max(1).leading_zeros();
    let hi = ceil_log2(n as u64);
    (lo..=hi).map(|j| 1u64 << j).collect()
}

pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Nodes of `cluster ∩ core` whose degree in the original graph exceeds `w`.
pub fn w_relevant(g_orig: &CapGraph, cluster: &[NodeId], core: &[NodeId], w: u64) -> Vec<NodeId> {
    let core: HashSet<NodeId> = core.iter().copied().collect();
    let mut out: Vec<NodeId> = cluster
        .iter()
        .copied()
        .filter(|v| core.contains(v) && g_orig.degree(*v) > w)
        .collect();
    out.sort_unstable();
    out
}

/// Guesses for the sizes of the two sides of a cut projected onto an
/// expander: `x, x'` count the side holding the target (relevant nodes, all
/// nodes), `y, y'` the other side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GuessTuple {
    pub x: u64,
    pub x_prime: u64,
    pub y: u64,
    pub y_prime: u64,
}

/// The smallest power of two (or zero) at least `v`.
pub fn round_guess(v: u64) -> u64 {
    if v == 0 {
        0
    } else {
        let p = v.next_power_of_two();
        if p == v {
            v
        } else {
            p / 2
        }
    }
}

impl GuessTuple {
    /// The tuple that rounds each count down to a power of two.
    pub fn covering(l_hat: u64, l: u64, r_hat: u64, r: u64) -> Self {
        GuessTuple {
            x: round_guess(l_hat),
            x_prime: round_guess(l),
            y: round_guess(r_hat),
            y_prime: round_guess(r),
        }
    }

    pub fn skipped(&self, phi: Phi) -> bool {
        self.x > self.x_prime || self.y > self.y_prime || exceeds_two_over(self.x.min(self.y), phi)
    }

    pub fn is_large(&self, w: u64) -> bool {
        8 * self.x_prime >= w || 8 * self.y_prime >= w
    }
}

/// `v > 2 / φ`.
fn exceeds_two_over(v: u64, phi: Phi) -> bool {
    (v as u128) * (*phi.numer() as u128) > 2 * (*phi.denom() as u128)
}

/// All tuples for an original graph on `n` nodes.
pub fn guess_tuples(n: usize) -> Vec<GuessTuple> {
    let top = ceil_log2(n as u64);
    let pows: Vec<u64> = (0..=top).map(|j| 1u64 << j).collect();
    let with_zero: Vec<u64> = std::iter::once(0).chain(pows.iter().copied()).collect();
    let mut out = Vec::new();
    for &x in &pows {
        for &xp in &pows {
            for &y in &with_zero {
                for &yp in &with_zero {
                    out.push(GuessTuple {
                        x,
                        x_prime: xp,
                        y,
                        y_prime: yp,
                    });
                }
            }
        }
    }
    out
}

/// Work plan of one scale, merged over all tuples: every distinct
/// `(x, expander)` isolating-cuts sub-procedure and every expander queried
/// directly runs once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Plan {
    /// `x` → smallest `|H|` that some large tuple with this `x` accepts.
    isolate: BTreeMap<u64, u64>,
    /// Smallest `|H|` accepted by a large tuple that queries top estimates.
    top_query: Option<u64>,
    /// Values of `x + y` from small tuples.
    small_sums: BTreeSet<u64>,
}

fn plan(n: usize, w: u64, phi: Phi) -> Plan {
    let mut p = Plan::default();
    for t in guess_tuples(n) {
        if t.skipped(phi) {
            continue;
        }
        if t.is_large(w) {
            let size = t.x_prime + t.y_prime;
            if !exceeds_two_over(t.x, phi) {
                let e = p.isolate.entry(t.x).or_insert(size);
                *e = (*e).min(size);
            } else {
                p.top_query = Some(p.top_query.map_or(size, |s| s.min(size)));
            }
        } else {
            p.small_sums.insert(t.x + t.y);
        }
    }
    p
}

/// Per-expander view restricted to the auxiliary graph.
#[derive(Clone, Debug)]
struct ClusterView {
    /// Relevant core nodes of `G'` other than the pivot.
    hat: Vec<NodeId>,
    /// `α(H)`, counting the pivot when it is relevant.
    alpha: u64,
    size: u64,
    cut: u64,
}

struct ScaleState {
    w: u64,
    sparsifier: CapGraph,
    plan: Plan,
    clusters: Vec<ClusterView>,
    /// Nodes already queried at this scale; the answer never changes.
    queried: HashSet<NodeId>,
}

/// Everything a round needs about one auxiliary graph `G'` and its pivot.
pub struct EgqContext<'a> {
    pub graph: &'a CapGraph,
    pub pivot: NodeId,
    pub room: usize,
    pub gamma: u32,
    pub scales: &'a Scales,
    states: Vec<ScaleState>,
}

impl<'a> EgqContext<'a> {
    /// `origin` maps nodes of `graph` to original nodes; `core` marks the
    /// un-contracted ones.
    pub fn new(
        graph: &'a CapGraph,
        origin: &[Vec<NodeId>],
        core: &[bool],
        pivot: NodeId,
        scales: &'a Scales,
        room: usize,
        gamma: u32,
    ) -> Self {
        let states = scales
            .scales
            .iter()
            .map(|sc| {
                let mut clusters: Vec<ClusterView> = sc
                    .decomposition
                    .clusters
                    .iter()
                    .zip(&sc.cluster_cut)
                    .map(|(c, &cut)| ClusterView {
                        hat: Vec::new(),
                        alpha: 0,
                        size: c.len() as u64,
                        cut,
                    })
                    .collect();
                for x in 0..graph.n() {
                    if !core[x] {
                        continue;
                    }
                    let o = origin[x][0];
                    if scales.degree[o] > sc.w {
                        let cv = &mut clusters[sc.cluster_of[o]];
                        cv.alpha += 1;
                        if x != pivot {
                            cv.hat.push(x);
                        }
                    }
                }
                ScaleState {
                    w: sc.w,
                    sparsifier: nagamochi_ibaraki(graph, 2 * sc.w),
                    plan: plan(scales.n, sc.w, sc.phi),
                    clusters,
                    queried: HashSet::new(),
                }
            })
            .collect();
        EgqContext {
            graph,
            pivot,
            room,
            gamma,
            scales,
            states,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RoundStats {
    pub work: MeterSnapshot,
    /// Done nodes after the round.
    pub done: usize,
}

fn query(st: &mut ScaleState, pivot: NodeId, v: NodeId, est: &mut EstimateTable, meter: &Meter) -> Result<()> {
    if est.is_done(v) || !st.queried.insert(v) {
        return Ok(());
    }
    let r = meter.flow(&st.sparsifier, pivot, v, Some(2 * st.w))?;
    match r.sink_side {
        Some(side) => {
            if est.offer_exact(v, side) {
                meter.add_decrement();
            }
        }
        // λ ≥ 2w ≥ c'(v) ≥ λ, and a singleton cannot shrink
        None => {
            let e = est.get(v).expect("tracked");
            if e.testify.value <= 2 * st.w && e.testify.members == [v] {
                est.certify(v);
            }
        }
    }
    Ok(())
}

/// One round over every scale.
///
/// Direct queries run before the isolating-cuts trials of the same scale.
/// A node queried at scale `w` is then either done or known to have
/// connectivity at least `2w`, so trials whose sampled nodes are all in that
/// state cannot change the table and are skipped.
pub fn egq_round(ctx: &mut EgqContext<'_>, est: &mut EstimateTable, seed: u64, meter: &Meter) -> Result<RoundStats> {
    let before = meter.snapshot();
    let n = ctx.graph.n().max(2) as f64;
    let pivot = ctx.pivot;
    for (si, st) in ctx.states.iter_mut().enumerate() {
        let w = st.w;
        // small expanders with many outgoing edges
        for ci in 0..st.clusters.len() {
            let cv = &st.clusters[ci];
            let hit = st
                .plan
                .small_sums
                .iter()
                .any(|&s| cv.alpha <= 2 * s && 2 * cv.cut >= s * w);
            if hit {
                for v in cv.hat.clone() {
                    query(st, pivot, v, est, meter)?;
                }
            }
        }
        // direct queries to the highest estimates
        if let Some(min_size) = st.plan.top_query {
            let take = 5 * ctx.room;
            for ci in 0..st.clusters.len() {
                if st.clusters[ci].size < min_size {
                    continue;
                }
                let mut order = st.clusters[ci].hat.clone();
                order.sort_by_key(|&v| (std::cmp::Reverse(est.c_prime(v)), v));
                order.truncate(take);
                for v in order {
                    query(st, pivot, v, est, meter)?;
                }
            }
        }
        // random isolating sets
        let settled = |v: NodeId, est: &EstimateTable, st: &ScaleState| est.is_done(v) || st.queried.contains(&v);
        let isolate: Vec<(u64, u64)> = st.plan.isolate.iter().map(|(&x, &s)| (x, s)).collect();
        for (x, min_size) in isolate {
            let trials = (4.0 * ctx.gamma as f64 * x as f64 * n.ln()).ceil() as usize;
            for ci in 0..st.clusters.len() {
                let cv = &st.clusters[ci];
                if cv.size < min_size || cv.hat.iter().all(|&v| settled(v, est, st)) {
                    continue;
                }
                let hat = cv.hat.clone();
                let mut rng = seed::rng(seed, ((si as u64) << 48) ^ (x << 32) ^ ci as u64);
                for _ in 0..trials {
                    let c: Vec<NodeId> = hat.iter().copied().filter(|_| rng.gen_range(0..2 * x) == 0).collect();
                    if c.iter().all(|&v| settled(v, est, st)) {
                        continue;
                    }
                    let out = isolating_cuts_with(&st.sparsifier, pivot, &c, SplitMode::Halves, meter)?;
                    for (v, side) in out.cuts {
                        if side.value < 2 * w && est.offer_candidate(v, side) {
                            meter.add_decrement();
                        }
                    }
                }
            }
        }
    }
    Ok(RoundStats {
        work: meter.snapshot() - before,
        done: est.done_count(),
    })
}
