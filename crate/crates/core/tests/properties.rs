use proptest::prelude::*;

use cuttree::egq::{egq_round, EgqContext, EstimateTable, GuessTuple};
use cuttree::expander::{certify_expander, decompose_with, Certificate, DecomposeOptions};
use cuttree::flow::{latest_min_cut, max_flow_capped};
use cuttree::graph::{build_auxiliary, contract, cut_value, CapGraph, NodeId};
use cuttree::harness::{for_each_cut, oracle_latest_cut};
use cuttree::isolating::isolating_cuts;
use cuttree::sparsify::nagamochi_ibaraki;
use cuttree::subcubic::{build_tree, preprocess, query_rounds, AlgoParams, Instance};
use cuttree::{
    apmf_query, gomory_hu_classic, gusfield, k_partial_tree, partial_tree_for_subset, verify_tree, Meter, PartitionTree,
};
use num_rational::Ratio;

/// Any graph on up to `max_n` nodes with small capacities, possibly
/// disconnected.
fn graph(max_n: usize) -> impl Strategy<Value = CapGraph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 1u64..4), 0..3 * n).prop_map(move |es| {
            let es: Vec<_> = es.into_iter().filter(|(u, v, _)| u != v).collect();
            CapGraph::from_edges(n, es).unwrap()
        })
    })
}

fn connected(max_n: usize) -> impl Strategy<Value = CapGraph> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(0usize..1000, n - 1),
            prop::collection::vec((0..n, 0..n, 1u64..4), 0..2 * n),
        )
            .prop_map(move |(parents, extra)| {
                let mut es: Vec<(usize, usize, u64)> = (1..n).map(|v| (parents[v - 1] % v, v, 1)).collect();
                es.extend(extra.into_iter().filter(|(u, v, _)| u != v));
                CapGraph::from_edges(n, es).unwrap()
            })
    })
}

fn simple_connected(max_n: usize) -> impl Strategy<Value = CapGraph> {
    connected(max_n).prop_map(|g| {
        let mut es: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        es.sort_unstable();
        es.dedup();
        CapGraph::from_unit_edges(g.n(), es).unwrap()
    })
}

fn subset(n: usize, bits: u64) -> Vec<NodeId> {
    (0..n).filter(|&v| bits >> v & 1 == 1).collect()
}

fn min_cut_by_enumeration(g: &CapGraph, s: NodeId, t: NodeId) -> u64 {
    let free: Vec<NodeId> = (0..g.n()).filter(|&x| x != s && x != t).collect();
    let mut inside = vec![false; g.n()];
    inside[t] = true;
    let mut best = u64::MAX;
    for_each_cut(g, &free, &mut inside, |_, v| best = best.min(v));
    best
}

/// Every edge weight of `t` equals the cut its removal induces.
fn edges_match_cuts(g: &CapGraph, t: &PartitionTree) -> bool {
    t.edges.iter().all(|&(i, j, w)| {
        let comps = t.components_without(i);
        let at = t.adjacency()[i].iter().position(|&(y, _)| y == j).unwrap();
        let side: Vec<NodeId> = comps[at].iter().flat_map(|&s| t.supers[s].iter().copied()).collect();
        cut_value(g, &side).unwrap() == w
    })
}

fn latest_family(g: &CapGraph, p: NodeId) -> Vec<Option<Vec<NodeId>>> {
    (0..g.n())
        .map(|v| (v != p).then(|| latest_min_cut(g, p, v, None).unwrap().sink_side.unwrap().members))
        .collect()
}

fn contains(set: &[NodeId], x: NodeId) -> bool {
    set.binary_search(&x).is_ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn submodular_and_posimodular(g in graph(12), a in any::<u64>(), b in any::<u64>()) {
        let n = g.n();
        let (sa, sb) = (subset(n, a), subset(n, b));
        let union: Vec<_> = (0..n).filter(|v| contains(&sa, *v) || contains(&sb, *v)).collect();
        let inter: Vec<_> = (0..n).filter(|v| contains(&sa, *v) && contains(&sb, *v)).collect();
        let a_b: Vec<_> = sa.iter().copied().filter(|v| !contains(&sb, *v)).collect();
        let b_a: Vec<_> = sb.iter().copied().filter(|v| !contains(&sa, *v)).collect();
        let d = |s: &[NodeId]| cut_value(&g, s).unwrap();
        prop_assert!(d(&sa) + d(&sb) >= d(&union) + d(&inter));
        prop_assert!(d(&sa) + d(&sb) >= d(&a_b) + d(&b_a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn contraction_preserves_refined_cuts(g in graph(10), groups_seed in any::<u64>(), side in any::<u64>()) {
        let n = g.n();
        // group i collects nodes whose two seed bits read i, except group 0
        let label = |v: usize| (groups_seed >> (2 * v) & 3) as usize;
        let groups: Vec<Vec<NodeId>> = (1..4).map(|i| (0..n).filter(|&v| label(v) == i).collect()).collect();
        let aux = contract(&g, &groups).unwrap();
        let picked: Vec<NodeId> = (0..aux.graph.n()).filter(|&x| side >> x & 1 == 1).collect();
        prop_assert_eq!(cut_value(&aux.graph, &picked).unwrap(), cut_value(&g, &aux.expand(&picked)).unwrap());
        let mut seen: Vec<NodeId> = aux.origin.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn auxiliary_origins_partition(g in connected(12), q in any::<u64>()) {
        let mut terms = subset(g.n(), q);
        if terms.is_empty() {
            terms.push(0);
        }
        let t = partial_tree_for_subset(&g, &terms).unwrap();
        for i in 0..t.len() {
            let aux = build_auxiliary(&t, &g, i).unwrap();
            let mut seen: Vec<NodeId> = aux.origin.iter().flatten().copied().collect();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..g.n()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn flow_value_is_min_cut(g in graph(11), s in 0usize..11, t in 0usize..11) {
        let (s, t) = (s % g.n(), t % g.n());
        prop_assume!(s != t);
        let r = max_flow_capped(&g, s, t, None).unwrap();
        prop_assert_eq!(r.value, min_cut_by_enumeration(&g, s, t));
        let capped = latest_min_cut(&g, s, t, Some(r.value + 1)).unwrap();
        prop_assert_eq!(capped, latest_min_cut(&g, s, t, None).unwrap());
    }

    #[test]
    fn latest_cut_lemmas(g in connected(12), p in 0usize..12) {
        let p = p % g.n();
        let fam = latest_family(&g, p);
        let d = |s: &[NodeId]| cut_value(&g, s).unwrap();
        for a in 0..g.n() {
            let Some(ca) = &fam[a] else { continue };
            for b in 0..g.n() {
                let Some(cb) = &fam[b] else { continue };
                let inter = ca.iter().filter(|x| contains(cb, **x)).count();
                let nested = inter == ca.len() || inter == cb.len();
                prop_assert!(nested || inter == 0, "latest cuts cross");
                if contains(ca, b) {
                    let mut u: Vec<NodeId> = ca.iter().chain(cb.iter()).copied().collect();
                    u.sort_unstable();
                    u.dedup();
                    prop_assert_eq!(d(&u), d(ca));
                }
                if !contains(cb, a) && !contains(ca, b) {
                    let minus: Vec<NodeId> = ca.iter().copied().filter(|x| !contains(cb, *x)).collect();
                    prop_assert_eq!(d(&minus), d(ca));
                }
            }
        }
    }

    #[test]
    fn latest_cut_matches_oracle(g in graph(10), s in 0usize..10, t in 0usize..10) {
        let (s, t) = (s % g.n(), t % g.n());
        prop_assume!(s != t);
        let got = latest_min_cut(&g, s, t, None).unwrap().sink_side.unwrap();
        prop_assert_eq!(got, oracle_latest_cut(&g, s, t).unwrap());
    }

    #[test]
    fn sparsifier_preserves_small_cuts(g in graph(11), k in 1u64..=5, side in any::<u64>()) {
        let h = nagamochi_ibaraki(&g, k);
        prop_assert!(h.total_cap() <= k * (g.n() as u64 - 1));
        let s = subset(g.n(), side);
        let (a, b) = (cut_value(&g, &s).unwrap(), cut_value(&h, &s).unwrap());
        if a < k {
            prop_assert_eq!(a, b);
        } else {
            prop_assert!(b >= k);
        }
    }

    #[test]
    fn sparsifier_composes_with_capped_flow(g in graph(10), k in 1u64..=5, s in 0usize..10, t in 0usize..10) {
        let (s, t) = (s % g.n(), t % g.n());
        prop_assume!(s != t);
        let h = nagamochi_ibaraki(&g, k);
        prop_assert_eq!(latest_min_cut(&h, s, t, Some(k)).unwrap(), latest_min_cut(&g, s, t, Some(k)).unwrap());
    }

    #[test]
    fn decomposition_is_a_certified_partition(g in graph(14), num in 1u64..=4, seed in any::<u64>()) {
        let phi = Ratio::new(num, 10);
        let d = decompose_with(&g, phi, &DecomposeOptions { seed, ..Default::default() }).unwrap();
        let mut seen: Vec<NodeId> = d.clusters.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..g.n()).collect::<Vec<_>>());
        for c in &d.clusters {
            prop_assert_eq!(certify_expander(&g, c, phi).unwrap(), Certificate::ExactPass);
        }
    }

    #[test]
    fn isolating_cuts_are_disjoint_valid_and_exact_when_isolated(
        g in connected(13), p in 0usize..13, bits in any::<u64>()
    ) {
        let n = g.n();
        let p = p % n;
        let c: Vec<NodeId> = subset(n, bits).into_iter().filter(|&v| v != p).collect();
        prop_assume!(!c.is_empty());
        let out = isolating_cuts(&g, p, &c).unwrap();
        let mut owner = vec![None; n];
        for (&v, side) in &out.cuts {
            prop_assert!(side.contains(v) && !side.contains(p));
            prop_assert_eq!(cut_value(&g, &side.members).unwrap(), side.value);
            let latest = latest_min_cut(&g, p, v, None).unwrap().sink_side.unwrap();
            prop_assert!(side.value >= latest.value);
            if latest.members.iter().filter(|x| c.contains(x)).count() == 1 {
                prop_assert_eq!(side, &latest);
            }
            for &x in &side.members {
                prop_assert!(owner[x].is_none(), "outputs overlap");
                owner[x] = Some(v);
            }
        }
        let expected = (usize::BITS - (c.len() - 1).leading_zeros()) as usize;
        prop_assert_eq!(out.levels, expected);
        prop_assert!(out.level_sizes.iter().all(|&s| s <= n + 2 * c.len()));
    }

    #[test]
    fn classic_and_gusfield_match_enumeration(g in connected(9)) {
        let a = gomory_hu_classic(&g).unwrap().value_matrix();
        prop_assert_eq!(&a, &gusfield(&g).unwrap().value_matrix());
        for s in 0..g.n() {
            for t in s + 1..g.n() {
                prop_assert_eq!(a[s][t], min_cut_by_enumeration(&g, s, t));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    /// Estimates never rise, never drop below the connectivity, always
    /// testify by a real cut, and done entries hold the latest cut.
    #[test]
    fn egq_rounds_are_monotone_and_sound(g in simple_connected(14), p in 0usize..14, room in 4usize..8, seed in any::<u64>()) {
        let n = g.n();
        let p = p % n;
        let params = AlgoParams { room: Some(room), seed, ..Default::default() };
        let pre = preprocess(&g, &params, &Meter::new()).unwrap();
        let inst = Instance::root(&g);
        let mut est = EstimateTable::new(&g, p, &inst.core);
        let mut ctx = EgqContext::new(&g, &inst.origin, &inst.core, p, &pre.scales, pre.derived.r, params.gamma);
        let lambda: Vec<u64> = (0..n).map(|v| if v == p { 0 } else { max_flow_capped(&g, p, v, None).unwrap().value }).collect();
        for round in 0..3 {
            let before: Vec<Option<u64>> = (0..n).map(|v| est.c_prime(v)).collect();
            egq_round(&mut ctx, &mut est, round, &Meter::new()).unwrap();
            for v in est.nodes() {
                let e = est.get(v).unwrap();
                prop_assert!(e.testify.value <= before[v].unwrap());
                prop_assert!(e.testify.value >= lambda[v]);
                prop_assert!(e.testify.contains(v) && !e.testify.contains(p));
                prop_assert_eq!(cut_value(&g, &e.testify.members).unwrap(), e.testify.value);
                if e.done {
                    prop_assert_eq!(&e.testify, &oracle_latest_cut(&g, p, v).unwrap());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partition_tree_edges_are_cuts(g in connected(12), q in any::<u64>(), k in 1u64..6) {
        let mut terms = subset(g.n(), q);
        terms.push(g.n() - 1);
        terms.dedup();
        prop_assert!(edges_match_cuts(&g, &partial_tree_for_subset(&g, &terms).unwrap()));
        prop_assert!(edges_match_cuts(&g, &k_partial_tree(&g, k).unwrap()));
    }

    #[test]
    fn k_partial_tree_is_sound(g in connected(24), k in 1u64..8) {
        let t = k_partial_tree(&g, k).unwrap();
        let exact = gomory_hu_classic(&g).unwrap().value_matrix();
        let of = t.super_of(g.n());
        for a in 0..g.n() {
            for b in a + 1..g.n() {
                if of[a] == of[b] {
                    prop_assert!(exact[a][b] > k);
                } else if exact[a][b] <= k {
                    prop_assert_eq!(t.min_between(g.n(), a, b), Some(exact[a][b]));
                }
            }
        }
    }

    #[test]
    fn expander_graph_stays_whole(g in connected(14), seed in any::<u64>()) {
        let all: Vec<NodeId> = (0..g.n()).collect();
        let phi = Ratio::new(1, 20);
        prop_assume!(certify_expander(&g, &all, phi).unwrap() == Certificate::ExactPass);
        let d = decompose_with(&g, phi, &DecomposeOptions { seed, ..Default::default() }).unwrap();
        prop_assert_eq!(d.clusters, vec![all]);
    }

    /// The tuple describing a true cut is among those the rounds enumerate,
    /// for every node whose connectivity the scale is meant to find.
    #[test]
    fn true_tuples_are_not_skipped(g in simple_connected(14), p in 0usize..14) {
        let n = g.n();
        let p = p % n;
        let params = AlgoParams { room: Some(4), ..Default::default() };
        let pre = preprocess(&g, &params, &Meter::new()).unwrap();
        for sc in &pre.scales.scales {
            for v in (0..n).filter(|&v| v != p && g.degree(v) > sc.w) {
                let cut = oracle_latest_cut(&g, p, v).unwrap();
                if cut.value >= 2 * sc.w {
                    continue;
                }
                let h = &sc.decomposition.clusters[sc.cluster_of[v]];
                let relevant = |x: &NodeId| g.degree(*x) > sc.w;
                let (inside, outside): (Vec<NodeId>, Vec<NodeId>) = h.iter().partition(|x| cut.contains(**x));
                let t = GuessTuple::covering(
                    inside.iter().filter(|x| relevant(x)).count() as u64,
                    inside.len() as u64,
                    outside.iter().filter(|x| relevant(x)).count() as u64,
                    outside.len() as u64,
                );
                prop_assert!(!t.skipped(sc.phi), "w={} v={} {:?}", sc.w, v, t);
            }
        }
    }

    /// Estimates leaving the query rounds are bounded by the degree and the
    /// connectivity and testify by a real cut.
    #[test]
    fn query_rounds_keep_estimates_sound(g in simple_connected(16), p in 0usize..16, room in 4usize..9, seed in any::<u64>()) {
        let p = p % g.n();
        let params = AlgoParams { room: Some(room), seed, ..Default::default() };
        let pre = preprocess(&g, &params, &Meter::new()).unwrap();
        let (est, _) = query_rounds(&pre, &params, &Instance::root(&g), p, seed, &Meter::new()).unwrap();
        for v in est.nodes() {
            let e = est.get(v).unwrap();
            let lambda = max_flow_capped(&g, p, v, None).unwrap().value;
            prop_assert!(lambda <= e.testify.value && e.testify.value <= g.degree(v));
            prop_assert_eq!(cut_value(&g, &e.testify.members).unwrap(), e.testify.value);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn all_builders_agree_and_verify(g in simple_connected(28), room in prop::option::of(4usize..16), seed in any::<u64>()) {
        let params = AlgoParams { room, seed, ..Default::default() };
        let (t, _) = build_tree(&g, &params).unwrap();
        prop_assert!(verify_tree(&g, &t).unwrap().accepted());
        let classic = gomory_hu_classic(&g).unwrap();
        let gus = gusfield(&g).unwrap();
        prop_assert!(verify_tree(&g, &classic).unwrap().accepted());
        prop_assert!(verify_tree(&g, &gus).unwrap().accepted());
        let m = classic.value_matrix();
        prop_assert_eq!(&t.value_matrix(), &m);
        prop_assert_eq!(&gus.value_matrix(), &m);
        if g.n() > 1 {
            prop_assert_eq!(apmf_query(&t, 0, g.n() - 1).unwrap(), m[0][g.n() - 1]);
        }
    }
}
