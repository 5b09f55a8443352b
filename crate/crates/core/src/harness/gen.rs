//! Seeded graph generators, including fixtures with a prescribed
//! cut-equivalent tree.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::flow::latest_min_cut;
use crate::graph::{cut_value, CapGraph, NodeId};
use crate::seed;
use crate::tree::GHTree;
use crate::verify::verify_tree;

const FIXTURE_RETRIES: usize = 50;

/// Connected `G(n, p)`, resampled until connected.
pub fn gen_erdos_renyi(n: usize, p_edge: f64, seed: u64) -> Result<CapGraph> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(p_edge > 0.0 && p_edge <= 1.0) {
        return Err(Error::InvalidParameter("edge probability must lie in (0, 1]".into()));
    }
    for attempt in 0.. {
        let mut rng = seed::rng(seed, attempt);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if p_edge >= 1.0 || rng.gen::<f64>() < p_edge {
                    edges.push((u, v));
                }
            }
        }
        let g = CapGraph::from_unit_edges(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    unreachable!()
}

/// `clusters` dense blocks of `size` nodes (`p_in` inside) linked by
/// `links` random unit edges between consecutive blocks. Connected.
pub fn gen_clustered(clusters: usize, size: usize, p_in: f64, links: usize, seed: u64) -> Result<CapGraph> {
    if clusters == 0 || size == 0 || links == 0 {
        return Err(Error::InvalidParameter(
            "clusters, size and links must be positive".into(),
        ));
    }
    let n = clusters * size;
    for attempt in 0.. {
        let mut rng = seed::rng(seed, attempt);
        let mut edges = Vec::new();
        for c in 0..clusters {
            let base = c * size;
            for a in 0..size {
                for b in a + 1..size {
                    if rng.gen::<f64>() < p_in {
                        edges.push((base + a, base + b));
                    }
                }
            }
            if c + 1 < clusters {
                for _ in 0..links {
                    let a = base + rng.gen_range(0..size);
                    let b = base + size + rng.gen_range(0..size);
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let g = CapGraph::from_unit_edges(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    unreachable!()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightProfile {
    /// Unit capacities: each triple is a triangle hanging off the center.
    Unit,
    /// Small random capacities, validated against the intended tree.
    Weighted,
}

/// A star of triples: center `p`, inner nodes `u_i`, each with two leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarOfTriples {
    pub center: NodeId,
    /// `[u, a, b]` per triple.
    pub triples: Vec<[NodeId; 3]>,
    /// The intended cut-equivalent tree.
    pub tree: GHTree,
}

impl StarOfTriples {
    pub fn inner(&self) -> Vec<NodeId> {
        self.triples.iter().map(|t| t[0]).collect()
    }
}

/// `3 n + 1` nodes whose cut-equivalent tree is a star of triples. Node 0 is
/// the center; triple `i` is `(3i + 1, 3i + 2, 3i + 3)`.
pub fn gen_star_of_triples(n_triples: usize, profile: WeightProfile, seed: u64) -> Result<(CapGraph, StarOfTriples)> {
    if n_triples == 0 {
        return Err(Error::InvalidParameter("need at least one triple".into()));
    }
    let n = 3 * n_triples + 1;
    for attempt in 0..FIXTURE_RETRIES {
        let mut rng = seed::rng(seed, attempt as u64);
        let mut edges = Vec::new();
        let mut triples = Vec::new();
        for i in 0..n_triples {
            let (u, a, b) = (3 * i + 1, 3 * i + 2, 3 * i + 3);
            triples.push([u, a, b]);
            let (ca, cb, cab, cp) = match profile {
                WeightProfile::Unit => (1, 1, 1, 1),
                WeightProfile::Weighted => {
                    let ca = rng.gen_range(4..=8);
                    let cb = rng.gen_range(4..=8);
                    (ca, cb, rng.gen_range(1..=ca.min(cb)), rng.gen_range(1..=3))
                }
            };
            edges.extend([(u, a, ca), (u, b, cb), (a, b, cab), (0, u, cp)]);
        }
        let g = CapGraph::from_edges(n, edges)?;
        let mut tree_edges = Vec::new();
        for &[u, a, b] in &triples {
            tree_edges.push((0, u, cut_value(&g, &[u, a, b])?));
            tree_edges.push((u, a, g.degree(a)));
            tree_edges.push((u, b, g.degree(b)));
        }
        let tree = GHTree::new(n, tree_edges)?;
        if star_is_realized(&g, &tree, &triples)? {
            return Ok((
                g,
                StarOfTriples {
                    center: 0,
                    triples,
                    tree,
                },
            ));
        }
    }
    Err(Error::FixtureRetriesExhausted(FIXTURE_RETRIES))
}

fn star_is_realized(g: &CapGraph, tree: &GHTree, triples: &[[NodeId; 3]]) -> Result<bool> {
    if !verify_tree(g, tree)?.accepted() {
        return Ok(false);
    }
    for &[u, a, b] in triples {
        let side = latest_min_cut(g, 0, u, None)?.sink_side.expect("exact");
        if side.members != [u, a, b] {
            return Ok(false);
        }
        for leaf in [a, b] {
            let side = latest_min_cut(g, u, leaf, None)?.sink_side.expect("exact");
            if side.members != [leaf] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Two weighted stars whose centers are joined by an edge of weight `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoStar {
    pub c_left: NodeId,
    pub c_right: NodeId,
    /// The left star, center included, sorted.
    pub left: Vec<NodeId>,
    pub right: Vec<NodeId>,
    pub lambda: u64,
}

/// A weighted tree on `n` nodes (shuffled ids): a left and a right star with
/// centers joined by weight `w`. Right leaves hang by thick (`> w`) or thin
/// (`< w`) edges about half and half; nearly every left leaf is thin, so
/// almost every leaf pair has a singleton minimum cut.
pub fn gen_two_star_hard(n: usize, w: u64, seed: u64) -> Result<(CapGraph, TwoStar)> {
    if w == 0 || n < 4 {
        return Err(Error::InvalidParameter("need w >= 1 and n >= 4".into()));
    }
    let leaves_left = (n - 2) / 2;
    for attempt in 0..FIXTURE_RETRIES {
        let mut rng = seed::rng(seed, attempt as u64);
        let mut ids: Vec<NodeId> = (0..n).collect();
        ids.shuffle(&mut rng);
        let (cl, cr) = (ids[0], ids[1]);
        let thick = |rng: &mut rand_chacha::ChaCha8Rng| rng.gen_range(w + 1..=2 * w);
        let thin = |rng: &mut rand_chacha::ChaCha8Rng| if w > 1 { rng.gen_range(1..w) } else { 2 };
        let thick_left = (leaves_left / 8).max(1);
        let mut edges = vec![(cl, cr, w)];
        let mut left = vec![cl];
        for (k, &x) in ids[2..2 + leaves_left].iter().enumerate() {
            let c = if k < thick_left || w == 1 {
                thick(&mut rng)
            } else {
                thin(&mut rng)
            };
            edges.push((cl, x, c));
            left.push(x);
        }
        for (k, &x) in ids[2 + leaves_left..].iter().enumerate() {
            let c = if k % 2 == 0 || w == 1 {
                thick(&mut rng)
            } else {
                thin(&mut rng)
            };
            edges.push((cr, x, c));
        }
        left.sort_unstable();
        let g = CapGraph::from_edges(n, edges)?;
        let r = latest_min_cut(&g, cr, cl, None)?;
        let side = r.sink_side.expect("exact");
        if r.value == w && side.members == left {
            let mut right: Vec<NodeId> = (0..n).filter(|x| left.binary_search(x).is_err()).collect();
            right.sort_unstable();
            return Ok((
                g,
                TwoStar {
                    c_left: cl,
                    c_right: cr,
                    left,
                    right,
                    lambda: w,
                },
            ));
        }
    }
    Err(Error::FixtureRetriesExhausted(FIXTURE_RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erdos_renyi_basics() {
        let k5 = gen_erdos_renyi(5, 1.0, 3).unwrap();
        assert_eq!(k5.m(), 10);
        let two = gen_erdos_renyi(2, 0.5, 9).unwrap();
        assert_eq!(two.m(), 1);
        assert_eq!(
            gen_erdos_renyi(12, 0.3, 4).unwrap(),
            gen_erdos_renyi(12, 0.3, 4).unwrap()
        );
        assert!(gen_erdos_renyi(0, 0.5, 1).is_err());
    }

    #[test]
    fn single_triple() {
        for profile in [WeightProfile::Unit, WeightProfile::Weighted] {
            let (g, s) = gen_star_of_triples(1, profile, 5).unwrap();
            assert_eq!(g.n(), 4);
            assert_eq!(s.triples, vec![[1, 2, 3]]);
        }
    }

    #[test]
    fn two_star_structure() {
        let (g, t) = gen_two_star_hard(20, 5, 1).unwrap();
        assert_eq!(g.n(), 20);
        assert_eq!(t.left.len(), 10);
        assert!(t.left.contains(&t.c_left));
        assert_eq!(gen_two_star_hard(20, 5, 1).unwrap().1, t);
    }

    #[test]
    fn clustered_is_connected() {
        let g = gen_clustered(4, 10, 0.6, 2, 7).unwrap();
        assert_eq!(g.n(), 40);
        assert!(g.is_connected());
    }
}
