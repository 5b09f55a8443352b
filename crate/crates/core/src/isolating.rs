//! Isolating cuts: one minimum cut per terminal from a common pivot, using
//! `⌈log₂ |C|⌉` rounds of flows on contracted graphs.
//!
//! Each round splits every terminal group in two, merges the pivot with the
//! first half and takes the latest minimum cut toward the second half. The
//! side holding the second half is contracted into the pivot before the first
//! half recurses, and the other side before the second half recurses. By
//! posimodularity a terminal whose latest cut avoids every other terminal
//! never loses part of that cut to a contraction, so it comes out exact. The
//! split graphs only ever gain contracted nodes, so no capacity larger than
//! the graph's own total is ever introduced.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{contract, membership, CapGraph, CutSide, NodeId};
use crate::meter::Meter;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SplitMode {
    /// First half: the smallest `⌈|C|/2⌉` terminals by id.
    #[default]
    Halves,
    /// Round `j` separates terminals by bit `j` of their rank in `C`.
    BitIndex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingCuts {
    /// A cut side per terminal; pairwise disjoint, each excludes the pivot.
    pub cuts: BTreeMap<NodeId, CutSide>,
    /// Number of splitting rounds.
    pub levels: usize,
    /// Summed node counts of the subproblems split in each round.
    pub level_sizes: Vec<usize>,
}

struct Sub {
    h: CapGraph,
    pivot: NodeId,
    /// `(terminal, rank in C, node of h)`.
    terms: Vec<(NodeId, usize, NodeId)>,
    /// Original nodes behind each node of `h`.
    origin: Vec<Vec<NodeId>>,
}

impl Sub {
    fn expand(&self, nodes: &[NodeId]) -> Vec<NodeId> {
        nodes.iter().flat_map(|&x| self.origin[x].iter().copied()).collect()
    }

    /// `h` with `group` merged into the pivot.
    fn fold_into_pivot(&self, group: Vec<NodeId>, terms: &[(NodeId, usize, NodeId)]) -> Result<Sub> {
        let aux = contract(&self.h, &[group])?;
        let origin = aux.origin.iter().map(|xs| self.expand(xs)).collect();
        Ok(Sub {
            pivot: aux.node_of[self.pivot],
            terms: terms.iter().map(|&(v, r, x)| (v, r, aux.node_of[x])).collect(),
            h: aux.graph,
            origin,
        })
    }
}

pub fn isolating_cuts(g: &CapGraph, p: NodeId, c: &[NodeId]) -> Result<IsolatingCuts> {
    isolating_cuts_with(g, p, c, SplitMode::Halves, &Meter::new())
}

pub fn isolating_cuts_with(
    g: &CapGraph,
    p: NodeId,
    c: &[NodeId],
    mode: SplitMode,
    meter: &Meter,
) -> Result<IsolatingCuts> {
    membership(g.n(), &[p])?;
    membership(g.n(), c)?;
    let mut terms: Vec<NodeId> = c.to_vec();
    terms.sort_unstable();
    terms.dedup();
    if terms.is_empty() {
        return Err(Error::EmptySet);
    }
    if terms.binary_search(&p).is_ok() {
        return Err(Error::PivotInTerminals(p));
    }
    meter.add_isolating_call();
    let root = Sub {
        h: g.clone(),
        pivot: p,
        terms: terms.iter().enumerate().map(|(r, &v)| (v, r, v)).collect(),
        origin: (0..g.n()).map(|v| vec![v]).collect(),
    };
    let mut cuts = BTreeMap::new();
    let mut level_sizes = Vec::new();
    let mut active = vec![root];
    let mut round = 0;
    while !active.is_empty() {
        let (leaves, splits): (Vec<Sub>, Vec<Sub>) = active.into_iter().partition(|s| s.terms.len() == 1);
        let solved: Vec<Result<(NodeId, CutSide)>> = leaves
            .into_par_iter()
            .map(|s| {
                let (v, _, x) = s.terms[0];
                let r = meter.flow(&s.h, s.pivot, x, None)?;
                let side = r.sink_side.expect("uncapped flow is exact");
                Ok((v, CutSide::new(s.expand(&side.members), r.value)))
            })
            .collect();
        for r in solved {
            let (v, side) = r?;
            cuts.insert(v, side);
        }
        if splits.is_empty() {
            break;
        }
        level_sizes.push(splits.iter().map(|s| s.h.n()).sum());
        let next: Vec<Result<Vec<Sub>>> = splits.into_par_iter().map(|s| split(s, mode, round, meter)).collect();
        active = Vec::new();
        for r in next {
            active.extend(r?);
        }
        round += 1;
    }
    Ok(IsolatingCuts {
        cuts,
        levels: level_sizes.len(),
        level_sizes,
    })
}

fn split(s: Sub, mode: SplitMode, round: usize, meter: &Meter) -> Result<Vec<Sub>> {
    let (first, second): (Vec<_>, Vec<_>) = match mode {
        SplitMode::Halves => {
            let half = s.terms.len().div_ceil(2);
            (s.terms[..half].to_vec(), s.terms[half..].to_vec())
        }
        SplitMode::BitIndex => s.terms.iter().partition(|&&(_, r, _)| r >> round & 1 == 0),
    };
    if first.is_empty() || second.is_empty() {
        return Ok(vec![s]);
    }
    let mut g1: Vec<NodeId> = first.iter().map(|&(_, _, x)| x).collect();
    g1.push(s.pivot);
    let g2: Vec<NodeId> = second.iter().map(|&(_, _, x)| x).collect();
    let aux = contract(&s.h, &[g1, g2])?;
    let p1 = aux.node_of[s.pivot];
    let p2 = aux.node_of[second[0].2];
    let r = meter.flow(&aux.graph, p1, p2, None)?;
    let sink = r.sink_side.expect("uncapped flow is exact");
    let mut in_a = vec![false; s.h.n()];
    for x in aux.expand(&sink.members) {
        in_a[x] = true;
    }
    let mut a: Vec<NodeId> = (0..s.h.n()).filter(|&x| in_a[x]).collect();
    let b: Vec<NodeId> = (0..s.h.n()).filter(|&x| !in_a[x]).collect();
    a.push(s.pivot);
    let left = s.fold_into_pivot(a, &first)?;
    let right = s.fold_into_pivot(b, &second)?;
    Ok(vec![left, right])
}
