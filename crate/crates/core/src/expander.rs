//! Conductance, expansion certificates and a recursive expander
//! decomposition.
//!
//! Conductance of `S` inside a cluster `C` is measured in `G{C}`: the
//! subgraph induced by `C` with self-loops added so every node keeps its
//! degree from the host graph. Cut values only count edges inside `C`;
//! volumes use host degrees.

use num_rational::Ratio;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{membership, CapGraph, NodeId};
use crate::seed;

pub type Phi = Ratio<u64>;

/// Clusters at or below this size are certified by enumerating every cut.
pub const CERTIFICATION_THRESHOLD: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpanderDecomposition {
    /// Sorted clusters, ordered by smallest member.
    pub clusters: Vec<Vec<NodeId>>,
    pub phi: Phi,
    /// `Σ_i δ(V_i)` in the decomposed graph.
    pub crossing_edges: u64,
    /// Per cluster: whether its expansion was checked exhaustively.
    pub exact: Vec<bool>,
}

impl ExpanderDecomposition {
    /// Cluster index of every node.
    pub fn cluster_of(&self, n: usize) -> Vec<usize> {
        let mut of = vec![0; n];
        for (i, c) in self.clusters.iter().enumerate() {
            for &v in c {
                of[v] = i;
            }
        }
        of
    }

    /// Every node in its own cluster.
    pub fn singletons(g: &CapGraph) -> Self {
        ExpanderDecomposition {
            clusters: (0..g.n()).map(|v| vec![v]).collect(),
            phi: Ratio::new(1, 1),
            crossing_edges: 2 * g.total_cap(),
            exact: vec![true; g.n()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    ExactPass,
    /// A cut of the cluster with conductance below the target.
    ExactFail {
        witness: Vec<NodeId>,
        conductance: Phi,
    },
    HeuristicPass,
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    pub seed: u64,
    /// Spectral probes per split attempt on clusters above the threshold.
    pub probes: usize,
    pub threshold: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            seed: 0,
            probes: 8,
            threshold: CERTIFICATION_THRESHOLD,
        }
    }
}

fn ratio(num: u64, den: u64) -> Phi {
    if den == 0 {
        Ratio::new(0, 1)
    } else {
        Ratio::new(num, den)
    }
}

/// `a/b < c/d` without overflow.
fn less(an: u64, ad: u64, b: Phi) -> bool {
    (an as u128) * (*b.denom() as u128) < (*b.numer() as u128) * (ad as u128)
}

/// Parses `0.25`, `1/4` or `1` into a rational.
pub fn parse_phi(s: &str) -> Option<Phi> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (u64, u64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (b > 0).then(|| Ratio::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let den = 10u64.pow(frac.len() as u32);
    let i: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let f: u64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    Some(Ratio::new(i.checked_mul(den)?.checked_add(f)?, den))
}

/// Nearest rational with denominator `10^6` not above `x`.
pub fn phi_from_f64(x: f64) -> Phi {
    const DEN: u64 = 1_000_000;
    Ratio::new((x.max(0.0) * DEN as f64).floor() as u64, DEN)
}

/// Conductance of `s`, in `G{context}` when a context cluster is given and
/// in `g` otherwise. A side of zero volume gives conductance zero.
pub fn conductance(g: &CapGraph, s: &[NodeId], context: Option<&[NodeId]>) -> Result<Phi> {
    let in_s = membership(g.n(), s)?;
    let in_ctx = match context {
        Some(c) => membership(g.n(), c)?,
        None => vec![true; g.n()],
    };
    let s_count = in_s.iter().filter(|&&b| b).count();
    let ctx_count = in_ctx.iter().filter(|&&b| b).count();
    if s.iter().any(|&v| !in_ctx[v]) {
        return Err(Error::InvalidParameter("set is not inside the context cluster".into()));
    }
    if s_count == 0 || s_count == ctx_count {
        return Err(Error::TrivialCut);
    }
    let mut delta = 0;
    for e in g.edges() {
        if in_ctx[e.u] && in_ctx[e.v] && in_s[e.u] != in_s[e.v] {
            delta += e.cap;
        }
    }
    let degs = g.degrees();
    let (mut vs, mut vc) = (0, 0);
    for v in 0..g.n() {
        if in_ctx[v] {
            if in_s[v] {
                vs += degs[v];
            } else {
                vc += degs[v];
            }
        }
    }
    Ok(ratio(delta, vs.min(vc)))
}

/// The subgraph of a cluster with host degrees.
struct Local {
    nodes: Vec<NodeId>,
    deg: Vec<u64>,
    /// `(local neighbor, cap)` lists for edges inside the cluster.
    adj: Vec<Vec<(usize, u64)>>,
    total_vol: u64,
}

impl Local {
    fn new(g: &CapGraph, cluster: &[NodeId], degs: &[u64]) -> Self {
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in cluster.iter().enumerate() {
            local[v] = i;
        }
        let adj = cluster
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&(y, _)| local[y] != usize::MAX)
                    .map(|&(y, e)| (local[y], g.edge(e).cap))
                    .collect()
            })
            .collect();
        let deg: Vec<u64> = cluster.iter().map(|&v| degs[v]).collect();
        let total_vol = deg.iter().sum();
        Local {
            nodes: cluster.to_vec(),
            deg,
            adj,
            total_vol,
        }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Moves local node `x` across the cut, updating `delta` and `vol`.
    fn flip(&self, inside: &mut [bool], x: usize, delta: &mut u64, vol: &mut u64) {
        for &(y, c) in &self.adj[x] {
            if inside[y] == inside[x] {
                *delta += c;
            } else {
                *delta -= c;
            }
        }
        if inside[x] {
            *vol -= self.deg[x];
        } else {
            *vol += self.deg[x];
        }
        inside[x] = !inside[x];
    }

    /// Minimum conductance over all cuts, by Gray-code enumeration with the
    /// last node pinned outside. Returns the local members and the value.
    fn exhaustive_min(&self) -> (Vec<usize>, u64, u64) {
        let k = self.len();
        let mut inside = vec![false; k];
        let (mut delta, mut vol) = (0u64, 0u64);
        let mut best: Option<(u64, u64, Vec<bool>)> = None;
        for i in 1u64..(1u64 << (k - 1)) {
            let x = i.trailing_zeros() as usize;
            self.flip(&mut inside, x, &mut delta, &mut vol);
            let den = vol.min(self.total_vol - vol);
            // a zero-volume side has conductance zero
            let (num, den) = if den == 0 { (0, 1) } else { (delta, den) };
            let better = match &best {
                None => true,
                Some((bn, bd, _)) => (num as u128) * (*bd as u128) < (*bn as u128) * (den as u128),
            };
            if better {
                best = Some((num, den, inside.clone()));
            }
        }
        let (num, den, mask) = best.expect("cluster has at least two nodes");
        let members = (0..k).filter(|&i| mask[i]).collect();
        (members, num, den)
    }

    /// Best sweep cut over spectral orderings. Returns local members and the
    /// conductance as a fraction.
    fn spectral_sweep(&self, seed: u64, probes: usize) -> (Vec<usize>, u64, u64) {
        let k = self.len();
        let iters = 100 * ((k as f64).log2().ceil() as usize).max(1);
        let sq: Vec<f64> = self.deg.iter().map(|&d| (d as f64).sqrt()).collect();
        let norm = sq.iter().map(|x| x * x).sum::<f64>().sqrt();
        let top: Vec<f64> = sq.iter().map(|x| x / norm).collect();
        let self_loop: Vec<f64> = (0..k)
            .map(|i| (self.deg[i] - self.adj[i].iter().map(|&(_, c)| c).sum::<u64>()) as f64)
            .collect();
        let deflate = |y: &mut [f64]| {
            let dot: f64 = y.iter().zip(&top).map(|(a, b)| a * b).sum();
            for (a, b) in y.iter_mut().zip(&top) {
                *a -= dot * b;
            }
            let n = y.iter().map(|a| a * a).sum::<f64>().sqrt();
            if n > 0.0 {
                for a in y.iter_mut() {
                    *a /= n;
                }
            }
        };
        let mut best: Option<(u64, u64, Vec<usize>)> = None;
        let mut next = vec![0.0; k];
        for probe in 0..probes {
            let mut rng = seed::rng(seed, probe as u64);
            let mut y: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() - 0.5).collect();
            deflate(&mut y);
            for _ in 0..iters {
                for i in 0..k {
                    let mut acc = self_loop[i] * y[i] / self.deg[i] as f64;
                    for &(j, c) in &self.adj[i] {
                        acc += c as f64 * y[j] / (sq[i] * sq[j]);
                    }
                    next[i] = 0.5 * (y[i] + acc);
                }
                std::mem::swap(&mut y, &mut next);
                deflate(&mut y);
            }
            let mut order: Vec<usize> = (0..k).collect();
            let x: Vec<f64> = (0..k).map(|i| y[i] / sq[i]).collect();
            order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
            let mut inside = vec![false; k];
            let (mut delta, mut vol) = (0u64, 0u64);
            for (pos, &v) in order[..k - 1].iter().enumerate() {
                self.flip(&mut inside, v, &mut delta, &mut vol);
                let den = vol.min(self.total_vol - vol);
                let better = match &best {
                    None => true,
                    Some((bn, bd, _)) => (delta as u128) * (*bd as u128) < (*bn as u128) * (den as u128),
                };
                if better && den > 0 {
                    best = Some((delta, den, order[..=pos].to_vec()));
                }
            }
        }
        let (num, den, members) = best.expect("cluster has at least two nodes");
        (members, num, den)
    }
}

/// Checks that `G{cluster}` has conductance at least `phi`: exhaustively up
/// to [`CERTIFICATION_THRESHOLD`] nodes, by spectral sweeps above.
pub fn certify_expander(g: &CapGraph, cluster: &[NodeId], phi: Phi) -> Result<Certificate> {
    certify_with(g, cluster, phi, CERTIFICATION_THRESHOLD, 32, 0)
}

fn certify_with(
    g: &CapGraph,
    cluster: &[NodeId],
    phi: Phi,
    threshold: usize,
    probes: usize,
    seed: u64,
) -> Result<Certificate> {
    if cluster.is_empty() {
        return Err(Error::EmptySet);
    }
    membership(g.n(), cluster)?;
    if cluster.len() == 1 {
        return Ok(Certificate::ExactPass);
    }
    let exact = cluster.len() <= threshold;
    if !exact {
        let comps = induced_components(g, cluster, &mut vec![false; g.n()]);
        if comps.len() > 1 {
            return Ok(Certificate::ExactFail {
                witness: comps[0].clone(),
                conductance: Ratio::new(0, 1),
            });
        }
    }
    let local = Local::new(g, cluster, &g.degrees());
    let (members, num, den) = if exact {
        local.exhaustive_min()
    } else {
        local.spectral_sweep(seed, probes)
    };
    if less(num, den, phi) {
        let mut witness: Vec<NodeId> = members.iter().map(|&i| local.nodes[i]).collect();
        witness.sort_unstable();
        return Ok(Certificate::ExactFail {
            witness,
            conductance: ratio(num, den),
        });
    }
    Ok(if exact {
        Certificate::ExactPass
    } else {
        Certificate::HeuristicPass
    })
}

/// Components of `G[cluster]`, each sorted.
fn induced_components(g: &CapGraph, cluster: &[NodeId], in_cluster: &mut [bool]) -> Vec<Vec<NodeId>> {
    for &v in cluster {
        in_cluster[v] = true;
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &s in cluster {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for &(y, _) in g.neighbors(x) {
                if in_cluster[y] && seen.insert(y) {
                    comp.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    for &v in cluster {
        in_cluster[v] = false;
    }
    out
}

/// Splits `g` into clusters whose `G{V_i}` conductance is at least `phi`.
///
/// A cluster is split along a disconnection first, then along the least
/// conductance cut (exhaustive search up to the threshold, spectral sweeps
/// above) whenever that cut falls below `phi`.
pub fn decompose(g: &CapGraph, phi: Phi) -> Result<ExpanderDecomposition> {
    decompose_with(g, phi, &DecomposeOptions::default())
}

pub fn decompose_with(g: &CapGraph, phi: Phi, opts: &DecomposeOptions) -> Result<ExpanderDecomposition> {
    if *phi.numer() == 0 || phi > Ratio::new(1, 1) {
        return Err(Error::InvalidParameter("phi must lie in (0, 1]".into()));
    }
    let degs = g.degrees();
    let mut scratch = vec![false; g.n()];
    let mut work: Vec<Vec<NodeId>> = if g.n() == 0 { vec![] } else { vec![(0..g.n()).collect()] };
    let mut done: Vec<(Vec<NodeId>, bool)> = Vec::new();
    let mut attempt = 0u64;
    while let Some(c) = work.pop() {
        if c.len() == 1 {
            done.push((c, true));
            continue;
        }
        let comps = induced_components(g, &c, &mut scratch);
        if comps.len() > 1 {
            work.extend(comps);
            continue;
        }
        let local = Local::new(g, &c, &degs);
        let exact = c.len() <= opts.threshold;
        attempt += 1;
        let (members, num, den) = if exact {
            local.exhaustive_min()
        } else {
            local.spectral_sweep(seed::derive(opts.seed, attempt), opts.probes)
        };
        if less(num, den, phi) {
            let mut mark = vec![false; c.len()];
            for &i in &members {
                mark[i] = true;
            }
            let (a, b): (Vec<usize>, Vec<usize>) = (0..c.len()).partition(|&i| mark[i]);
            work.push(a.into_iter().map(|i| c[i]).collect());
            work.push(b.into_iter().map(|i| c[i]).collect());
        } else {
            done.push((c, exact));
        }
    }
    for (c, _) in done.iter_mut() {
        c.sort_unstable();
    }
    done.sort_by_key(|(c, _)| c[0]);
    let crossing_edges = done
        .iter()
        .map(|(c, _)| crate::graph::cut_value(g, c))
        .sum::<Result<u64>>()?;
    let (clusters, exact) = done.into_iter().unzip();
    Ok(ExpanderDecomposition {
        clusters,
        phi,
        crossing_edges,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique_edges(base: usize, k: usize, out: &mut Vec<(usize, usize)>) {
        for a in 0..k {
            for b in a + 1..k {
                out.push((base + a, base + b));
            }
        }
    }

    fn complete(k: usize) -> CapGraph {
        let mut e = Vec::new();
        clique_edges(0, k, &mut e);
        CapGraph::from_unit_edges(k, e).unwrap()
    }

    #[test]
    fn conductance_examples() {
        assert_eq!(conductance(&complete(4), &[0], None).unwrap(), Ratio::new(1, 1));
        let c6 = CapGraph::from_unit_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert_eq!(conductance(&c6, &[1, 2, 3], None).unwrap(), Ratio::new(1, 3));
        assert_eq!(conductance(&c6, &[], None), Err(Error::TrivialCut));
        // inside the cluster {0,1,2} the path 0-1-2 keeps host degrees 2
        assert_eq!(conductance(&c6, &[0], Some(&[0, 1, 2])).unwrap(), Ratio::new(1, 2));
    }

    #[test]
    fn two_cliques_split() {
        let mut e = Vec::new();
        clique_edges(0, 6, &mut e);
        clique_edges(6, 6, &mut e);
        e.push((5, 6));
        let g = CapGraph::from_unit_edges(12, e).unwrap();
        let d = decompose(&g, Ratio::new(1, 5)).unwrap();
        assert_eq!(d.clusters, vec![(0..6).collect::<Vec<_>>(), (6..12).collect()]);
        assert_eq!(d.crossing_edges, 2);
    }

    #[test]
    fn k8_single_cluster() {
        let d = decompose(&complete(8), Ratio::new(1, 10)).unwrap();
        assert_eq!(d.clusters.len(), 1);
        assert_eq!(d.crossing_edges, 0);
    }

    #[test]
    fn singleton_graph() {
        let d = decompose(&CapGraph::empty(1), Ratio::new(1, 2)).unwrap();
        assert_eq!(d.clusters, vec![vec![0]]);
    }

    #[test]
    fn certificates() {
        assert_eq!(
            certify_expander(&complete(6), &[0, 1, 2, 3, 4, 5], Ratio::new(1, 2)).unwrap(),
            Certificate::ExactPass
        );
        let p8 = CapGraph::from_unit_edges(8, (0..7).map(|i| (i, i + 1))).unwrap();
        match certify_expander(&p8, &(0..8).collect::<Vec<_>>(), Ratio::new(1, 2)).unwrap() {
            Certificate::ExactFail { witness, conductance } => {
                assert_eq!(conductance, Ratio::new(1, 7));
                assert!(witness == vec![0, 1, 2, 3] || witness == vec![4, 5, 6, 7]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            certify_expander(&p8, &[3], Ratio::new(1, 1)).unwrap(),
            Certificate::ExactPass
        );
    }

    #[test]
    fn spectral_finds_bridge_in_large_barbell() {
        let mut e = Vec::new();
        clique_edges(0, 12, &mut e);
        clique_edges(12, 12, &mut e);
        e.push((0, 12));
        let g = CapGraph::from_unit_edges(24, e).unwrap();
        let d = decompose(&g, Ratio::new(1, 10)).unwrap();
        assert_eq!(d.clusters.len(), 2);
        assert_eq!(d.clusters[0], (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn parse_phi_forms() {
        assert_eq!(parse_phi("0.25"), Some(Ratio::new(1, 4)));
        assert_eq!(parse_phi("1/5"), Some(Ratio::new(1, 5)));
        assert_eq!(parse_phi("1"), Some(Ratio::new(1, 1)));
        assert_eq!(parse_phi("x"), None);
    }
}
