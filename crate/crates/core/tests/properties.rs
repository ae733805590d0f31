use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use structure_entropy::coding_tree::{h_k_exact, h_tree_with};
use structure_entropy::entropy::{h1, h_partition, resistance_of_partition};
use structure_entropy::generators::{
    grid, natural_partition, random_connected, random_regular, security_model, spanning_tree_partition,
    SecurityModelParams,
};
use structure_entropy::partition_search::{exact_h2, greedy_h2, merge_delta, merge_split_criterion};
use structure_entropy::spectral::{cheeger_check_partition, jacobi, laplacian_spectrum, normalized_laplacian};
use structure_entropy::verify::{random_split, split_agrees};
use structure_entropy::{CodingTree, Graph, ModuleFunction, Partition, VertexSet};

fn graph_and_labels(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    (2..=max_n, 0.0..0.5f64, any::<bool>(), any::<u64>()).prop_flat_map(|(n, extra, weighted, seed)| {
        let g = random_connected(n, extra, weighted, seed).unwrap();
        (Just(g), prop::collection::vec(0..n, n))
    })
}

/// `min_S w(S, S̄) / vol(S)` over non-empty proper `S`: the conductance with
/// the larger side's volume in the denominator.
fn one_sided_conductance(g: &Graph) -> f64 {
    let n = g.n();
    let all = VertexSet::new(n, 0..n).unwrap();
    let vol = g.volume(&all);
    (1..(1u64 << n) - 1)
        .map(|mask| {
            let s = VertexSet::new(n, (0..n).filter(|&v| mask >> v & 1 == 1)).unwrap();
            g.boundary_weight(&s) / g.volume(&s).max(vol - g.volume(&s))
        })
        .fold(f64::INFINITY, f64::min)
}

fn subset(n: usize, mask: &[bool]) -> VertexSet {
    VertexSet::new(n, (0..n).filter(|&v| mask[v])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn volume_is_additive_and_cut_is_symmetric((g, labels) in graph_and_labels(30)) {
        let n = g.n();
        let a = subset(n, &labels.iter().map(|&l| l % 3 == 0).collect::<Vec<_>>());
        let b = subset(n, &labels.iter().map(|&l| l % 3 == 1).collect::<Vec<_>>());
        prop_assert!((g.volume(&a.union(&b)) - g.volume(&a) - g.volume(&b)).abs() < 1e-9);
        prop_assert_eq!(g.cut_weight(&a, &b).unwrap(), g.cut_weight(&b, &a).unwrap());
        let all = VertexSet::new(n, 0..n).unwrap();
        prop_assert_eq!(g.volume(&all), 2.0 * g.total_weight());
    }

    #[test]
    fn conductance_of_complement((g, labels) in graph_and_labels(14)) {
        let n = g.n();
        let s = subset(n, &labels.iter().map(|&l| l % 2 == 0).collect::<Vec<_>>());
        prop_assume!(!s.is_empty() && s.len() < n);
        let phi = g.conductance(&s).unwrap();
        prop_assert!((phi - g.conductance(&s.complement(n)).unwrap()).abs() < 1e-12);
        prop_assert!(g.graph_conductance().unwrap() <= phi + 1e-12);
    }

    #[test]
    fn local_resistance_law((g, labels) in graph_and_labels(50)) {
        let p = Partition::from_labels(&labels);
        let (h, hp) = (h1(&g).unwrap(), h_partition(&g, &p).unwrap());
        prop_assert!(h.is_finite() && hp.is_finite());
        prop_assert!(((h - hp) - resistance_of_partition(&g, &p).unwrap()).abs() < 1e-9);
        prop_assert!(h <= (g.n() as f64).log2() + 1e-12);
        prop_assert!((h_partition(&g, &Partition::trivial(g.n())).unwrap() - h).abs() < 1e-12);
        prop_assert!((h_partition(&g, &Partition::singletons(g.n())).unwrap() - h).abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_entropy_principle((g, _) in graph_and_labels(9)) {
        let (h2, _) = exact_h2(&g).unwrap();
        prop_assert!(h2 >= one_sided_conductance(&g) * h1(&g).unwrap() - 1e-9);
    }

    #[test]
    fn upper_bound_chain((g, _) in graph_and_labels(10)) {
        let (exact, _) = exact_h2(&g).unwrap();
        let (greedy, _) = greedy_h2(&g).unwrap();
        prop_assert!(exact <= greedy + 1e-12);
        prop_assert!(greedy <= h1(&g).unwrap() + 1e-12);
    }

    #[test]
    fn merge_delta_matches_recomputation((g, labels) in graph_and_labels(40), i in 0usize..40, j in 0usize..40) {
        let p = Partition::from_labels(&labels);
        prop_assume!(p.len() >= 2);
        let (i, j) = (i % p.len(), j % p.len());
        prop_assume!(i != j);
        let d = merge_delta(&g, &p, i, j).unwrap();
        let merged: Vec<usize> = p.assignment().iter().map(|&m| if m == j { i } else { m }).collect();
        let direct = h_partition(&g, &Partition::from_labels(&merged)).unwrap() - h_partition(&g, &p).unwrap();
        prop_assert!((d.delta_hp - direct).abs() < 1e-9);
    }

    #[test]
    fn volume_and_additive_module_functions((g, _) in graph_and_labels(40), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = h1(&g).unwrap();
        let degrees = ModuleFunction::Additive(g.degrees().to_vec());
        for _ in 0..5 {
            let t = CodingTree::random_binary(g.n(), &mut rng);
            prop_assert!((h_tree_with(&g, &t, &ModuleFunction::Volume).unwrap() - h).abs() < 1e-9);
            prop_assert!((h_tree_with(&g, &t, &degrees).unwrap() - h).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_heights_are_monotone((g, _) in graph_and_labels(6)) {
        let h = [1, 2, 3].map(|k| h_k_exact(&g, k).unwrap().0);
        prop_assert!(h[1] <= h[0] + 1e-9);
        prop_assert!(h[2] <= h[1] + 1e-9);
        prop_assert!(h[1] >= one_sided_conductance(&g) * h[0] - 1e-9);
    }

    #[test]
    fn merge_split_sign(n in 10usize..30, d in 2usize..5, seed in any::<u64>()) {
        prop_assume!(n * d % 2 == 0);
        let g = random_regular(n, d, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..10 {
            let (before, after, x, y1, y2) = random_split(n, &mut rng);
            let c = merge_split_criterion(&g, &x, &y1, &y2).unwrap();
            let diff = h_partition(&g, &after).unwrap() - h_partition(&g, &before).unwrap();
            prop_assert!(split_agrees(diff, c.predicted));
            prop_assert!((c.predicted_delta(g.vol()) - diff).abs() < 1e-9);
        }
    }

    #[test]
    fn spectra_of_random_graphs((g, labels) in graph_and_labels(40)) {
        let s = jacobi(&normalized_laplacian(&g).unwrap()).unwrap();
        prop_assert!(s.laplacian_invariants_hold(1e-8));
        prop_assert!(s.residual.unwrap() <= 1e-8);
        let p = Partition::from_labels(&labels);
        prop_assume!(p.len() >= 2);
        prop_assert!(cheeger_check_partition(&g, &p).unwrap().holds);
    }
}

#[test]
fn conductance_principle_fails_with_the_min_denominator() {
    // {0,1} holds 3/4 of the volume, so g/V = 1/3 while Φ(P3) = 1
    let g = Graph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
    let (h2, p) = exact_h2(&g).unwrap();
    assert_eq!(p, Partition::from_labels(&[0, 0, 1]));
    assert_eq!(g.graph_conductance().unwrap(), 1.0);
    assert!(h2 < h1(&g).unwrap());
    assert!(h2 >= one_sided_conductance(&g) * h1(&g).unwrap());
}

#[test]
fn security_model_is_deterministic_and_conserves_edges() {
    for seed in 0..8 {
        let params = SecurityModelParams::new(600, 1.5, 4, seed);
        let (g, trace) = security_model(&params).unwrap();
        let (g2, trace2) = security_model(&params).unwrap();
        assert_eq!(g, g2);
        assert_eq!(trace, trace2);
        assert!(g.is_connected());
        let n0 = params.n0;
        assert_eq!(g.m() + trace.shortfall, n0 * (n0 - 1) / 2 + (params.n - n0) * params.d);
        assert_eq!(trace.local_edges + trace.global_edges, g.m());
        assert_eq!(natural_partition(&trace).len(), trace.color_count());
    }
}

#[test]
fn spanning_modules_are_subtrees() {
    for seed in 0..5 {
        let g = random_regular(256, 3, seed).unwrap();
        let cert = spanning_tree_partition(&g).unwrap();
        let modules = cert.partition.module_sets();
        for m in &modules[..modules.len() - 1] {
            let sub = g.induced(m);
            assert!(sub.is_connected());
            assert!(sub.m() + 1 >= m.len());
        }
    }
    let g = grid(12).unwrap();
    assert!(laplacian_spectrum(&g).unwrap().laplacian_invariants_hold(1e-8));
}
