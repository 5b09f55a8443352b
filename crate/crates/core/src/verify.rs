//! Checking a tree against the graph it claims to describe.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flow::latest_min_cut;
use crate::graph::{cut_value, CapGraph, NodeId};
use crate::tree::GHTree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeFailure {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: u64,
    /// Value of the bipartition the edge induces.
    pub bipartition: u64,
    /// `λ(u, v)`, or `None` when it exceeds `weight`.
    pub lambda: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub failures: Vec<EdgeFailure>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every tree edge twice: its weight must equal the value of the
/// bipartition it induces and the connectivity of its endpoints. The second
/// check runs one flow capped just above the weight.
pub fn verify_tree(g: &CapGraph, t: &GHTree) -> Result<Verdict> {
    if t.n() != g.n() {
        return Err(Error::NonSpanningTree(format!(
            "tree has {} nodes, graph has {}",
            t.n(),
            g.n()
        )));
    }
    let checks: Result<Vec<Option<EdgeFailure>>> = (0..t.edges().len())
        .into_par_iter()
        .map(|i| {
            let (u, v, w) = t.edges()[i];
            let side = t.side_of_edge(i);
            let bipartition = cut_value(g, &side)?;
            let r = latest_min_cut(g, u, v, Some(w.saturating_add(1)))?;
            let lambda = r.exact_value();
            let ok = bipartition == w && lambda == Some(w);
            Ok((!ok).then_some(EdgeFailure {
                u,
                v,
                weight: w,
                bipartition,
                lambda,
            }))
        })
        .collect();
    Ok(Verdict {
        failures: checks?.into_iter().flatten().collect(),
    })
}
