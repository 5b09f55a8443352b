//! The cut-membership tree of a pivot: nodes grouped by the tree edge that
//! bounds their latest minimum cut from the pivot.

use crate::error::{Error, Result};
use crate::graph::{check_node, NodeId};
use crate::tree::GHTree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutMembershipTree {
    /// Bag 0 is `{p}`; the others are ordered by smallest member.
    pub bags: Vec<Vec<NodeId>>,
    /// Parent bag of every bag but the root.
    pub parent: Vec<Option<usize>>,
    /// Core nodes per bag; the root weighs 1.
    pub weight: Vec<usize>,
    pub bag_of: Vec<usize>,
}

impl CutMembershipTree {
    /// Total weight of the bags on the path from the root to `bag`, both
    /// ends included.
    pub fn depth_of(&self, mut bag: usize) -> usize {
        let mut d = self.weight[bag];
        while let Some(p) = self.parent[bag] {
            d += self.weight[p];
            bag = p;
        }
        d
    }

    /// Core nodes other than the pivot whose latest cut contains `x`.
    pub fn cut_members(&self, x: NodeId) -> usize {
        let b = self.bag_of[x];
        if b == 0 {
            0
        } else {
            self.depth_of(b) - self.weight[0]
        }
    }

    pub fn weighted_depth(&self) -> usize {
        (0..self.bags.len()).map(|b| self.depth_of(b)).max().unwrap_or(0)
    }
}

/// Groups nodes by `ℓ(u)`, the lightest edge on the tree path from `p` to
/// `u`, taking the one closest to `u` among ties. `core` marks the nodes
/// that count towards bag weights.
pub fn cut_membership_tree(t: &GHTree, p: NodeId, core: &[bool]) -> Result<CutMembershipTree> {
    let n = t.n();
    check_node(p, n)?;
    if core.len() != n {
        return Err(Error::InvalidParameter("core flags must cover every node".into()));
    }
    let adj = t.adjacency();
    // ell[u]: tree edge index of ℓ(u); near[e]: endpoint of e closer to p
    let mut ell = vec![usize::MAX; n];
    let mut near = vec![0; n.saturating_sub(1)];
    let mut seen = vec![false; n];
    seen[p] = true;
    let mut stack = vec![(p, u64::MAX, usize::MAX)];
    while let Some((x, best, at)) = stack.pop() {
        for &(y, w, e) in &adj[x] {
            if seen[y] {
                continue;
            }
            seen[y] = true;
            near[e] = x;
            let (b, a) = if w <= best { (w, e) } else { (best, at) };
            ell[y] = a;
            stack.push((y, b, a));
        }
    }
    let mut firsts: Vec<(NodeId, usize)> = Vec::new();
    let mut slot = vec![usize::MAX; n.saturating_sub(1)];
    for u in 0..n {
        if u != p && slot[ell[u]] == usize::MAX {
            slot[ell[u]] = firsts.len();
            firsts.push((u, ell[u]));
        }
    }
    let mut bags = vec![vec![p]];
    bags.extend(firsts.iter().map(|_| Vec::new()));
    let mut bag_of = vec![0; n];
    for u in 0..n {
        if u != p {
            bag_of[u] = slot[ell[u]] + 1;
            bags[bag_of[u]].push(u);
        }
    }
    let parent = (0..bags.len())
        .map(|b| (b > 0).then(|| bag_of[near[firsts[b - 1].1]]))
        .collect();
    let mut weight: Vec<usize> = bags.iter().map(|b| b.iter().filter(|&&u| core[u]).count()).collect();
    weight[0] = 1;
    Ok(CutMembershipTree {
        bags,
        parent,
        weight,
        bag_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_is_one_bag() {
        let t = GHTree::new(3, vec![(0, 1, 1), (1, 2, 2)]).unwrap();
        let m = cut_membership_tree(&t, 0, &[true; 3]).unwrap();
        assert_eq!(m.bags, vec![vec![0], vec![1, 2]]);
        assert_eq!(m.parent, vec![None, Some(0)]);
        assert_eq!(m.weighted_depth(), 3);
        assert_eq!(m.cut_members(2), 2);
    }

    #[test]
    fn star_bags_are_leaves() {
        let t = GHTree::new(4, vec![(0, 1, 5), (0, 2, 4), (0, 3, 3)]).unwrap();
        let m = cut_membership_tree(&t, 0, &[true; 4]).unwrap();
        assert_eq!(m.bags.len(), 4);
        assert!(m.parent[1..].iter().all(|&p| p == Some(0)));
        assert_eq!(m.weighted_depth(), 2);
    }

    #[test]
    fn ties_go_to_the_latest_edge() {
        let t = GHTree::new(4, vec![(0, 1, 2), (1, 2, 2), (2, 3, 5)]).unwrap();
        let m = cut_membership_tree(&t, 0, &[true; 4]).unwrap();
        assert_eq!(m.bags, vec![vec![0], vec![1], vec![2, 3]]);
        assert_eq!(m.parent, vec![None, Some(0), Some(1)]);
        assert_eq!(m.cut_members(3), 3);
    }
}
