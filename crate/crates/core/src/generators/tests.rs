use super::*;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::centroids::optimal_centroid;
use crate::data::Centroid;

fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges).unwrap()
}

fn figure_graph() -> Graph {
    graph(4, &[(1, 2), (1, 3), (1, 4), (2, 4)])
}

fn figure_colored() -> Graph {
    figure_graph().with_colors(vec![1, 2, 2, 3]).unwrap()
}

fn linf_figure_graph() -> Graph {
    graph(5, &[(1, 2), (1, 3), (1, 4), (2, 4), (3, 5), (5, 4)])
}

fn linfoct_graph() -> HioctInstance {
    HioctInstance { graph: graph(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]), t: 2 }
}

fn colorful_triangle() -> Graph {
    graph(3, &[(1, 2), (2, 3), (1, 3)]).with_colors(vec![1, 2, 3]).unwrap()
}

fn colorful_path() -> Graph {
    graph(3, &[(1, 2), (2, 3)]).with_colors(vec![1, 2, 3]).unwrap()
}

fn selection_minimum(inst: &SelectionInstance) -> crate::selection::Selection {
    select_bruteforce(inst, &SelectConfig::default()).unwrap().witness.unwrap()
}

fn rows(data: &Dataset) -> Vec<Vec<i64>> {
    data.points().iter().map(|p| p.coords().iter().map(|c| c.to_i64().unwrap()).collect()).collect()
}

fn chosen_rows(inst: &SelectionInstance, chosen: &[usize]) -> Vec<Vec<i64>> {
    chosen
        .iter()
        .enumerate()
        .map(|(g, &i)| inst.groups()[g][i].coords().iter().map(|c| c.to_i64().unwrap()).collect())
        .collect()
}

#[test]
fn graph_rejects_bad_edges() {
    assert!(Graph::new(3, &[(1, 1)]).is_err());
    assert!(Graph::new(3, &[(0, 1)]).is_err());
    assert!(Graph::new(3, &[(1, 4)]).is_err());
    assert!(Graph::new(3, &[(1, 2), (2, 1)]).is_err());
    assert!(graph(2, &[(2, 1)]).has_edge(1, 2));
    assert!(graph(2, &[]).with_colors(vec![1]).is_err());
    assert!(graph(2, &[]).with_colors(vec![0, 1]).is_err());
}

#[test]
fn formula_rejects_bad_clauses() {
    assert!(CnfFormula::new(3, vec![[1, 2, 4]]).is_err());
    assert!(CnfFormula::new(3, vec![[1, 0, 2]]).is_err());
    assert!(CnfFormula::new(3, vec![[1, 1, 2]]).is_err());
    assert!(CnfFormula::new(2, vec![[1, -1, 2]]).is_ok());
}

#[test]
fn reduction_names_round_trip() {
    for r in Reduction::ALL {
        assert_eq!(r.name().parse::<Reduction>().unwrap(), r);
    }
    assert_eq!("linf-2clust".parse::<Reduction>().unwrap(), Reduction::SatHioctLinf2);
    assert!("l3-clique".parse::<Reduction>().is_err());
}

#[test]
fn l0_clique_figure_instance() {
    let inst = gen_l0_clustering_from_clique(&figure_graph(), 3).unwrap();
    assert_eq!(inst.dataset().points().len(), 12);
    assert_eq!(inst.dataset().dimension(), 3);
    assert_eq!(inst.k(), 10);
    assert_eq!(inst.budget(), &CostValue::int(3));
    // padding c = |V| + (k i + j)|E| + e
    let data = rows(inst.dataset());
    assert_eq!(data[0], vec![1, 2, 4 + 5 * 4 + 1]);
    assert_eq!(data[4], vec![1, 4 + 6 * 4 + 1, 2]);
    assert_eq!(data[11], vec![4 + 9 * 4 + 4, 2, 4]);
    let out = solve_bruteforce(&inst, &BruteForceConfig::default()).unwrap();
    assert!(out.decision);
    assert_eq!(out.min_cost, CostValue::int(3));
    let clustering = out.clustering;
    let composite: Vec<&WeightedCluster> = clustering.clusters.iter().filter(|c| c.len() > 1).collect();
    assert_eq!(composite.len(), 1);
    let mut members: Vec<Vec<i64>> =
        composite[0].points().iter().map(|p| p.coords().iter().map(|c| c.to_i64().unwrap()).collect()).collect();
    members.sort();
    let mut expected = vec![vec![1, 2, 25], vec![1, 31, 4], vec![44, 2, 4]];
    expected.sort();
    assert_eq!(members, expected);
    let (centroid, cost) = optimal_centroid(&DistanceOrder::L0, composite[0]);
    assert_eq!(centroid, Centroid::from_i64(&[1, 2, 4]));
    assert_eq!(cost, CostValue::int(3));
}

#[test]
fn l0_clique_small_graphs() {
    let path = gen_l0_clustering_from_clique(&graph(3, &[(1, 2), (2, 3)]), 3).unwrap();
    assert!(!solve_bruteforce(&path, &BruteForceConfig::default()).unwrap().decision);
    let triangle = gen_l0_clustering_from_clique(&graph(3, &[(1, 2), (2, 3), (1, 3)]), 3).unwrap();
    assert!(solve_bruteforce(&triangle, &BruteForceConfig::default()).unwrap().decision);
    assert!(gen_l0_clustering_from_clique(&figure_graph(), 2).is_err());
    assert!(gen_l0_clustering_from_clique(&graph(3, &[]), 3).is_err());
}

#[test]
fn l0_mcc_figure_instance() {
    let inst = gen_l0_selection_from_mcc(&figure_colored(), 3).unwrap();
    assert_eq!(inst.t(), 3);
    assert_eq!(inst.groups().iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 1, 1]);
    assert_eq!(inst.budget(), &CostValue::int(3));
    let best = selection_minimum(&inst);
    assert_eq!(best.cost, CostValue::int(3));
    let chosen = chosen_rows(&inst, &best.chosen);
    assert_eq!(&chosen[0][..2], &[1, 2]);
    assert_eq!(best.centroid, Centroid::from_i64(&[1, 2, 4]));
    assert!(select(&inst, &SelectConfig::default()).unwrap().decision);
}

#[test]
fn l0_mcc_small_graphs() {
    let tri = gen_l0_selection_from_mcc(&colorful_triangle(), 3).unwrap();
    assert!(select_bruteforce(&tri, &SelectConfig::default()).unwrap().decision);
    let err = gen_l0_selection_from_mcc(&colorful_path(), 3).unwrap_err();
    assert!(matches!(err, Error::Vacuous(_)));
    let chain = graph(4, &[(1, 2), (2, 3), (3, 4)]).with_colors(vec![1, 2, 3, 1]).unwrap();
    let inst = gen_l0_selection_from_mcc(&chain, 3).unwrap();
    assert!(!select_bruteforce(&inst, &SelectConfig::default()).unwrap().decision);
    assert!(gen_l0_selection_from_mcc(&figure_graph(), 3).is_err());
}

#[test]
fn l1_mcc_figure_instance() {
    let inst = gen_l1_selection_from_mcc(&figure_colored(), 3).unwrap();
    assert_eq!(inst.t(), 6);
    assert_eq!(inst.budget(), &CostValue::int(15));
    let x12: Vec<Vec<i64>> = (0..2).map(|i| chosen_rows(&inst, &[i])[0].clone()).collect();
    assert_eq!(x12, vec![vec![1, 2, 0], vec![1, 3, 0]]);
    assert_eq!(chosen_rows(&inst, &[0, 0, 0, 0, 0, 0])[5], vec![5, 2, 4]);
    let best = selection_minimum(&inst);
    assert_eq!(best.cost, CostValue::int(15));
    assert_eq!(best.centroid, Centroid::from_i64(&[1, 2, 4]));
    assert!(!select_bruteforce(&inst.with_budget(CostValue::int(14)), &SelectConfig::default()).unwrap().decision);
    assert!(select(&inst, &SelectConfig::default()).unwrap().decision);
}

#[test]
fn l1_mcc_small_graphs() {
    let minus = graph(4, &[(1, 2), (1, 3), (1, 4)]).with_colors(vec![1, 2, 2, 3]).unwrap();
    assert!(gen_l1_selection_from_mcc(&minus, 3).is_err());
    let four_cycle = graph(4, &[(1, 2), (1, 4), (3, 4)]).with_colors(vec![1, 2, 2, 3]).unwrap();
    let no = gen_l1_selection_from_mcc(&four_cycle, 3).unwrap();
    assert!(!select_bruteforce(&no, &SelectConfig::default()).unwrap().decision);
    let tri = gen_l1_selection_from_mcc(&colorful_triangle(), 3).unwrap();
    assert_eq!(tri.budget(), &CostValue::int(12));
    assert!(select_bruteforce(&tri, &SelectConfig::default()).unwrap().decision);
}

#[test]
fn linf_clique_figure_instance() {
    let inst = gen_linf_clustering_from_clique(&linf_figure_graph(), 3).unwrap();
    assert_eq!(inst.dataset().dimension(), 9);
    assert_eq!(inst.k(), 3);
    assert_eq!(inst.budget(), &CostValue::int(3));
    // non-edge columns in the figure: 23, 34, 15, 25
    let figure: [[i64; 9]; 5] = [
        [2, 0, 0, 0, 0, 0, 0, 2, 0],
        [0, 2, 0, 0, 0, 2, 0, 0, 2],
        [0, 0, 2, 0, 0, -2, 2, 0, 0],
        [0, 0, 0, 2, 0, 0, -2, 0, 0],
        [0, 0, 0, 0, 2, 0, 0, -2, -2],
    ];
    let permutation = [0, 1, 2, 3, 4, 7, 5, 8, 6];
    let data = rows(inst.dataset());
    for (row, fig) in data.iter().zip(&figure) {
        let permuted: Vec<i64> = permutation.iter().map(|&c| fig[c]).collect();
        assert_eq!(row, &permuted);
    }
    let out = solve_bruteforce(&inst, &BruteForceConfig::default()).unwrap();
    assert_eq!(out.min_cost, CostValue::int(3));
    let clustering = out.clustering;
    let composite: Vec<&WeightedCluster> = clustering.clusters.iter().filter(|c| c.len() > 1).collect();
    assert_eq!(composite.len(), 1);
    let vertices: BTreeSet<usize> = composite[0]
        .points()
        .iter()
        .map(|p| p.coords()[..5].iter().position(|c| *c == BigInt::from(2)).unwrap() + 1)
        .collect();
    assert_eq!(vertices, BTreeSet::from([1, 2, 4]));
    let centroid = Centroid::from_i64(&[1, 1, 0, 1, 0, 1, 1, 1, -1]);
    let cost = crate::centroids::cluster_cost(&DistanceOrder::LInf, composite[0], &centroid).unwrap();
    assert_eq!(cost, CostValue::int(3));
}

#[test]
fn linf_clique_small_graphs() {
    let k3 = gen_linf_clustering_from_clique(&graph(3, &[(1, 2), (2, 3), (1, 3)]), 3).unwrap();
    assert_eq!((k3.dataset().dimension(), k3.k()), (3, 1));
    assert!(solve_bruteforce(&k3, &BruteForceConfig::default()).unwrap().decision);
    let c5 = gen_linf_clustering_from_clique(&graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]), 3).unwrap();
    assert!(!solve_bruteforce(&c5, &BruteForceConfig::default()).unwrap().decision);
    assert!(gen_linf_clustering_from_clique(&graph(2, &[(1, 2)]), 3).is_err());
}

#[test]
fn linf_mcc_figure_and_small_graphs() {
    let g = linf_figure_graph().with_colors(vec![1, 2, 2, 3, 3]).unwrap();
    let inst = gen_linf_selection_from_mcc(&g, 3).unwrap();
    assert_eq!(inst.groups().iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 2]);
    let best = selection_minimum(&inst);
    assert_eq!(best.chosen, vec![0, 0, 0]);
    assert!(cost_le(&best.cost, &CostValue::int(3), &Tolerance::default()));
    assert!(select(&inst, &SelectConfig::default()).unwrap().decision);
    let tri = gen_linf_selection_from_mcc(&colorful_triangle(), 3).unwrap();
    assert!(select_bruteforce(&tri, &SelectConfig::default()).unwrap().decision);
    let empty = graph(3, &[]).with_colors(vec![1, 2, 3]).unwrap();
    let no = gen_linf_selection_from_mcc(&empty, 3).unwrap();
    assert!(!select_bruteforce(&no, &SelectConfig::default()).unwrap().decision);
}

#[test]
fn lp_mcc_figure_instance() {
    let red = gen_lp_selection_from_mcc(&figure_colored(), 3, Ratio::from_integer(2)).unwrap();
    assert_eq!(red.exact_budget, Some(BigRational::from_integer(2.into())));
    let inst = red.to_selection().unwrap();
    let best = selection_minimum(&inst);
    assert_eq!(best.cost, CostValue::int(2));
    let third = |n: i64| (n, 3);
    assert_eq!(best.centroid, Centroid::from_ratios(&[third(2), third(2), (0, 1), third(2)]));
    assert!(select(&inst, &SelectConfig::default()).unwrap().decision);
    let minus = graph(4, &[(1, 3), (1, 4), (2, 4)]).with_colors(vec![1, 2, 2, 3]).unwrap();
    let no = gen_lp_selection_from_mcc(&minus, 3, Ratio::from_integer(2)).unwrap().to_selection().unwrap();
    assert_eq!(no.groups()[0].len(), 1);
    assert!(!select_bruteforce(&no, &SelectConfig::default()).unwrap().decision);
    let tri = gen_lp_selection_from_mcc(&colorful_triangle(), 3, Ratio::from_integer(2)).unwrap();
    assert!(select_bruteforce(&tri.to_selection().unwrap(), &SelectConfig::default()).unwrap().decision);
}

#[test]
fn lp_budget_matches_float_formula() {
    for k in 3..=7usize {
        for p in [Ratio::new(3, 2), Ratio::from_integer(2), Ratio::from_integer(3), Ratio::new(5, 4)] {
            let (value, exact) = lp_selection_budget(k, p, EVAL_DIGITS).unwrap();
            let pf = *p.numer() as f64 / *p.denom() as f64;
            let q = 1.0 / (pf - 1.0);
            let (a, b) = ((k - 1) as f64, ((k - 1) * (k - 2) / 2) as f64);
            let expected = k as f64 * a * b / (a.powf(q) + b.powf(q)).powf(pf - 1.0);
            assert!((value.to_f64() - expected).abs() <= 1e-9 * expected, "k {k} p {p}");
            assert_eq!(exact.is_some(), p == Ratio::from_integer(2));
        }
    }
    assert!(lp_selection_budget(3, Ratio::from_integer(1), 20).is_err());
    let g = gen_lp_selection_from_mcc(&colorful_triangle(), 3, Ratio::from_integer(3)).unwrap();
    assert!(g.to_selection().is_err());
}

#[test]
fn lp_clique_tuple_has_exactly_the_budget() {
    // for p = 2 each clique coordinate holds k - 1 ones among C(k,2) vectors
    for k in 3..=6usize {
        let n = k;
        let edges: Vec<(usize, usize)> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
        let g = graph(n, &edges).with_colors((1..=n).collect()).unwrap();
        let inst = gen_lp_selection_from_mcc(&g, k, Ratio::from_integer(2)).unwrap().to_selection().unwrap();
        let cluster = inst.cluster(&vec![0; inst.t()]).unwrap();
        let (_, cost) = optimal_centroid(&DistanceOrder::L2, &cluster);
        assert_eq!(&cost, inst.budget(), "k {k}");
    }
}

#[test]
fn hioct_gadget_shape() {
    let f = CnfFormula::new(3, vec![[1, -2, 3]]).unwrap();
    let h = gen_hioct_from_3sat(&f).unwrap();
    assert_eq!(h.graph.n(), 31);
    assert_eq!(h.t, 6);
    assert_eq!(h.graph.edges().len(), 3 * (1 + 2 * 7) + 7);
    let layout = HioctLayout { num_vars: 3, num_clauses: 1 };
    assert_eq!(layout.literal(-2), 4);
    assert_eq!(layout.pendant(1, 1), 7);
    assert_eq!(layout.clause(1, 4), 31);
    assert!(h.graph.has_edge(layout.clause(1, 4), layout.clause(1, 1)));
    assert!(h.graph.has_edge(layout.clause(1, 2), 4));
    assert!(h.graph.has_edge(layout.pendant(3, 7), 6));
}

#[test]
fn hioct_follows_satisfiability() {
    let sat = CnfFormula::new(3, vec![[1, -2, 3]]).unwrap();
    let h = gen_hioct_from_3sat(&sat).unwrap();
    let delta = hioct_solution(&h).unwrap();
    assert!(delta.iter().map(|&d| u64::from(d)).sum::<u64>() <= h.t);
    assert!(hioct_odd_cycle(&h.graph, &delta).is_none());
    let all: Vec<[i64; 3]> = (0..8)
        .map(|m: i64| {
            [if m & 1 == 0 { 1 } else { -1 }, if m & 2 == 0 { 2 } else { -2 }, if m & 4 == 0 { 3 } else { -3 }]
        })
        .collect();
    let unsat = CnfFormula::new(3, all).unwrap();
    assert!(satisfying_assignment(&unsat).unwrap().is_none());
    assert!(hioct_solution(&gen_hioct_from_3sat(&unsat).unwrap()).is_none());
}

#[test]
fn hioct_branching_matches_bruteforce() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let g = random_graph(&mut rng, n, 0.5, 0);
        let t = rng.random_range(0..=4);
        let h = HioctInstance { graph: g, t };
        let fast = hioct_solution(&h);
        let slow = hioct_bruteforce(&h, 1 << 20).unwrap();
        assert_eq!(fast.is_some(), slow.is_some(), "{} t {t}", h.graph);
        if let Some(delta) = fast {
            assert!(delta.iter().map(|&d| u64::from(d)).sum::<u64>() <= t);
            assert!(hioct_odd_cycle(&h.graph, &delta).is_none());
        }
    }
}

#[test]
fn odd_cycle_detection() {
    let triangle = graph(3, &[(1, 2), (2, 3), (1, 3)]);
    let cycle = hioct_odd_cycle(&triangle, &[0, 0, 0]).unwrap();
    assert_eq!(cycle.len(), 3);
    assert!(hioct_odd_cycle(&triangle, &[2, 0, 0]).is_none());
    assert!(hioct_odd_cycle(&triangle, &[1, 1, 0]).is_none());
    assert!(hioct_odd_cycle(&triangle, &[1, 0, 0]).is_some());
    let square = graph(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]);
    assert!(hioct_odd_cycle(&square, &[0; 4]).is_none());
}

#[test]
fn linf2_figure_instance() {
    let h = linfoct_graph();
    let debug = gen_linf2_from_hioct(&h, true).unwrap();
    assert!(!debug.trivially_yes);
    let data = rows(debug.instance.dataset());
    assert_eq!(data, vec![vec![2, 2, 2, 0, 0], vec![-2, 0, 0, 2, 2], vec![0, -2, 0, -2, 0], vec![0, 0, -2, 0, -2]]);
    assert_eq!(debug.instance.budget(), &CostValue::int(6));
    let full = gen_linf2_from_hioct(&h, false).unwrap();
    assert_eq!(full.instance.dataset().points().len(), 18);
    assert_eq!(full.instance.dataset().dimension(), 12);
    assert_eq!(full.instance.budget(), &CostValue::int(20));
    let out = solve_linf_bipartition(&full.instance, &BipartitionConfig::default()).unwrap();
    assert!(out.decision);
    let edge = HioctInstance { graph: graph(2, &[(1, 2)]), t: 0 };
    let single = gen_linf2_from_hioct(&edge, false).unwrap();
    assert!(solve_bruteforce(&single.instance, &BruteForceConfig::default()).unwrap().decision);
    let isolated = HioctInstance { graph: graph(5, &[(1, 2), (2, 3), (1, 3)]), t: 1 };
    let dropped = gen_linf2_from_hioct(&isolated, true).unwrap();
    assert_eq!(dropped.instance.dataset().points().len(), 3);
    assert!(gen_linf2_from_hioct(&HioctInstance { graph: graph(3, &[(1, 2)]), t: 5 }, false).unwrap().trivially_yes);
}

#[test]
fn linf2_debug_follows_hioct_on_small_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 60 {
        let n = rng.random_range(2..=6);
        let g = random_graph(&mut rng, n, 0.6, 0);
        if g.edges().is_empty() {
            continue;
        }
        let t = rng.random_range(0..=2);
        let h = HioctInstance { graph: g, t };
        let target = gen_linf2_from_hioct(&h, false).unwrap();
        if target.trivially_yes {
            continue;
        }
        let out = solve_linf_bipartition(&target.instance, &BipartitionConfig::default()).unwrap();
        assert_eq!(out.decision, hioct_solution(&h).is_some(), "{} t {t}", h.graph);
        checked += 1;
    }
}

#[test]
fn clique_oracle() {
    assert!(graph_has_clique(&figure_graph(), 3, false).unwrap());
    assert!(!graph_has_clique(&figure_graph(), 4, false).unwrap());
    assert!(graph_has_clique(&figure_colored(), 3, true).unwrap());
    let same = figure_graph().with_colors(vec![1, 1, 2, 3]).unwrap();
    assert!(!graph_has_clique(&same, 3, true).unwrap());
    assert!(graph_has_clique(&graph(2, &[]), 1, false).unwrap());
    assert!(graph_has_clique(&graph(13, &[]), 1, false).is_err());
}

#[test]
fn sat_oracle() {
    let f = CnfFormula::new(3, vec![[1, 2, 3], [-1, -2, -3]]).unwrap();
    let a = satisfying_assignment(&f).unwrap().unwrap();
    assert!(f.satisfied_by(&a));
}

#[test]
fn graph_enumeration_counts() {
    let counts: Vec<usize> = (1..=6).map(|n| graphs_up_to_isomorphism(n).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
}

#[test]
fn formula_enumeration_counts() {
    assert_eq!(all_formulas(2, 1).len(), 4);
    assert_eq!(all_formulas(2, 2).len(), 10);
    assert_eq!(all_formulas(3, 1).len(), 20);
    assert!(all_formulas(2, 2).iter().all(|f| satisfying_assignment(f).unwrap().is_some()));
}

#[test]
fn l0_diagnostics_on_figure_cluster() {
    let cluster = WeightedCluster::from_rows(&[&[1, 2, 25], &[1, 31, 4], &[44, 2, 4]], &[1, 1, 1]).unwrap();
    let diag = l0_cluster_diagnostics(&cluster, 4).unwrap();
    assert_eq!((diag.beta, diag.gamma), (3, 0));
    assert_eq!(diag.ratio, l0_kappa(3));
    let mixed = WeightedCluster::from_rows(&[&[1, 2, 23], &[1, 3, 30]], &[1, 1]).unwrap();
    let diag = l0_cluster_diagnostics(&mixed, 4).unwrap();
    assert_eq!((diag.beta, diag.gamma), (2, 1));
    for k in 3..=10 {
        assert_eq!(l0_kappa(k), BigRational::new(2.into(), BigInt::from(k + 1)));
    }
}

#[test]
fn verify_reports_on_figures() {
    let cfg = VerifyConfig::default();
    let params = ReductionParams::default();
    for r in [Reduction::L0Clique, Reduction::LinfClique] {
        let report = verify_reduction(r, &Source::Graph(figure_graph()), &params, &cfg).unwrap();
        assert!(report.agree && report.source_truth, "{report}");
    }
    for r in [Reduction::L0Mcc, Reduction::L1Mcc, Reduction::LinfMcc, Reduction::LpMcc] {
        let report = verify_reduction(r, &Source::Graph(figure_colored()), &params, &cfg).unwrap();
        assert!(report.agree && report.source_truth, "{report}");
        let path = verify_reduction(r, &Source::Graph(colorful_path()), &params, &cfg).unwrap();
        assert!(path.agree && !path.source_truth, "{path}");
    }
    let f = CnfFormula::new(3, vec![[1, -2, 3]]).unwrap();
    let chain = verify_reduction(Reduction::SatHioctLinf2, &Source::Formula(f), &params, &cfg).unwrap();
    assert!(chain.agree && chain.source_truth, "{chain}");
    assert!(verify_reduction(
        Reduction::L0Clique,
        &Source::Formula(CnfFormula::new(3, vec![]).unwrap()),
        &params,
        &cfg
    )
    .is_err());
}

#[test]
fn paper_mode_agrees_on_figures() {
    let cfg = VerifyConfig { mode: SolverMode::Paper, ..VerifyConfig::default() };
    let params = ReductionParams::default();
    let report = verify_reduction(Reduction::LinfClique, &Source::Graph(figure_graph()), &params, &cfg).unwrap();
    assert!(report.agree, "{report}");
    for r in [Reduction::L0Mcc, Reduction::L1Mcc, Reduction::LinfMcc, Reduction::LpMcc] {
        let report = verify_reduction(r, &Source::Graph(figure_colored()), &params, &cfg).unwrap();
        assert!(report.agree, "{report}");
    }
}
