//! Ground truth by exhaustive enumeration and cross-checked flows.

use crate::error::{Error, Result};
use crate::flow::max_flow_capped;
use crate::gomory_hu::gomory_hu_classic;
use crate::graph::{check_node, CapGraph, CutSide, NodeId};

/// Largest graph the exhaustive oracles accept.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Visits every assignment of `free` nodes to either side, with all other
/// nodes fixed by `inside`. The callback sees the indicator and cut value.
pub fn for_each_cut(g: &CapGraph, free: &[NodeId], inside: &mut [bool], mut f: impl FnMut(&[bool], u64)) {
    let mut value: u64 = g
        .edges()
        .iter()
        .filter(|e| inside[e.u] != inside[e.v])
        .map(|e| e.cap)
        .sum();
    f(inside, value);
    for i in 1u64..(1u64 << free.len()) {
        let x = free[i.trailing_zeros() as usize];
        for &(y, e) in g.neighbors(x) {
            let c = g.edge(e).cap;
            if inside[y] == inside[x] {
                value += c;
            } else {
                value -= c;
            }
        }
        inside[x] = !inside[x];
        f(inside, value);
    }
}

fn check_size(g: &CapGraph) -> Result<()> {
    if g.n() > EXHAUSTIVE_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "exhaustive oracle limited to {EXHAUSTIVE_LIMIT} nodes"
        )));
    }
    Ok(())
}

/// The latest minimum `(p, v)`-cut by enumerating every separating set.
/// Panics if the inclusion-minimal minimum side is not unique, which would
/// contradict submodularity.
pub fn oracle_latest_cut(g: &CapGraph, p: NodeId, v: NodeId) -> Result<CutSide> {
    check_size(g)?;
    check_node(p, g.n())?;
    check_node(v, g.n())?;
    if p == v {
        return Err(Error::SameEndpoints(p));
    }
    let free: Vec<NodeId> = (0..g.n()).filter(|&x| x != p && x != v).collect();
    let mut inside = vec![false; g.n()];
    inside[v] = true;
    let mut best = u64::MAX;
    let mut meet: Vec<bool> = Vec::new();
    for_each_cut(g, &free, &mut inside, |s, val| {
        if val < best {
            best = val;
            meet = s.to_vec();
        } else if val == best {
            for (m, &b) in meet.iter_mut().zip(s) {
                *m &= b;
            }
        }
    });
    let members: Vec<NodeId> = (0..g.n()).filter(|&x| meet[x]).collect();
    let meet_value = crate::graph::cut_value(g, &members)?;
    assert_eq!(meet_value, best, "intersection of minimum cuts is not minimum");
    Ok(CutSide::new(members, best))
}

/// `λ` for every pair, by enumerating all bipartitions once.
pub fn brute_force_all_pairs(g: &CapGraph) -> Result<Vec<Vec<u64>>> {
    check_size(g)?;
    let n = g.n();
    let mut mat = vec![vec![u64::MAX; n]; n];
    for (i, row) in mat.iter_mut().enumerate() {
        row[i] = 0;
    }
    if n < 2 {
        return Ok(mat);
    }
    let free: Vec<NodeId> = (1..n).collect();
    let mut inside = vec![false; n];
    for_each_cut(g, &free, &mut inside, |s, val| {
        if s.iter().all(|&b| !b) {
            return;
        }
        for u in 0..n {
            if !s[u] {
                continue;
            }
            for v in 0..n {
                if !s[v] && val < mat[u][v] {
                    mat[u][v] = val;
                    mat[v][u] = val;
                }
            }
        }
    });
    Ok(mat)
}

/// All-pairs connectivity from the classic builder, cross-checked against a
/// direct flow on every tenth pair.
pub fn oracle_all_pairs(g: &CapGraph) -> Result<Vec<Vec<u64>>> {
    let mat = gomory_hu_classic(g)?.value_matrix();
    let mut k = 0usize;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if k % 10 == 0 {
                let flow = max_flow_capped(g, u, v, None)?.value;
                if flow != mat[u][v] {
                    return Err(Error::OracleDisagreement {
                        u,
                        v,
                        tree: mat[u][v],
                        flow,
                    });
                }
            }
            k += 1;
        }
    }
    Ok(mat)
}
