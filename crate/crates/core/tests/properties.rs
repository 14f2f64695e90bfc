mod common;

use common::{compact, random_graph, rng};
use eocc::dissimilarity::{weighted_euclidean, Params};
use eocc::fuzzy::{hard_decision, membership, soft_decision, FuzzyRegion, TConorm};
use eocc::graph::EuclideanGraph;
use eocc::metrics::auc;
use eocc::partition::{modularity_edge_form, normalize_modularity, Partition};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = EuclideanGraph> {
    (2usize..=12, any::<u64>()).prop_map(|(n, seed)| random_graph(n, &mut rng(seed)))
}

fn graph_and_partition() -> impl Strategy<Value = (EuclideanGraph, Vec<usize>)> {
    graph_strategy().prop_flat_map(|g| {
        let n = g.len();
        (Just(g), prop::collection::vec(0..n, n)).prop_map(|(g, raw)| (g, compact(&raw)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn modularity_bounds((g, a) in graph_and_partition()) {
        let p = Partition::evaluate(&g, a).unwrap();
        prop_assert!((-0.5..=1.0).contains(&p.modularity_q()));
        prop_assert!((0.0..=1.0).contains(&p.modularity_m()));
    }
}

proptest! {
    #[test]
    fn modularity_ignores_cluster_names((g, a) in graph_and_partition(), shift in 1usize..5) {
        let k = a.iter().max().unwrap() + 1;
        let renamed: Vec<usize> = a.iter().map(|c| (c + shift) % k).collect();
        let q1 = modularity_edge_form(&g, &a).unwrap();
        let q2 = modularity_edge_form(&g, &renamed).unwrap();
        prop_assert!((q1 - q2).abs() <= 1e-12);
    }

    #[test]
    fn normalized_modularity_is_monotone(a in -0.5f64..=1.0, b in -0.5f64..=1.0) {
        let (ma, mb) = (normalize_modularity(a).unwrap(), normalize_modularity(b).unwrap());
        if a < b {
            prop_assert!(ma < mb);
        }
    }

    #[test]
    fn weighted_euclidean_is_a_metric(
        x in prop::collection::vec(-5.0f64..5.0, 4),
        y in prop::collection::vec(-5.0f64..5.0, 4),
        z in prop::collection::vec(-5.0f64..5.0, 4),
        w in prop::collection::vec(0.0f64..=1.0, 4),
    ) {
        let p = Params::new(w).unwrap();
        let d = |a: &[f64], b: &[f64]| weighted_euclidean(a, b, &p).unwrap();
        prop_assert_eq!(d(&x, &x), 0.0);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-12);
    }

    #[test]
    fn weighted_euclidean_scales_with_root_of_weights(
        x in prop::collection::vec(-5.0f64..5.0, 3),
        y in prop::collection::vec(-5.0f64..5.0, 3),
        w in prop::collection::vec(0.0f64..=1.0, 3),
        c in 0.0f64..=1.0,
    ) {
        let base = weighted_euclidean(&x, &y, &Params::new(w.clone()).unwrap()).unwrap();
        let scaled = Params::new(w.iter().map(|v| c * v).collect()).unwrap();
        let got = weighted_euclidean(&x, &y, &scaled).unwrap();
        prop_assert!((got - c.sqrt() * base).abs() <= 1e-12 * (1.0 + base));
    }

    #[test]
    fn auc_invariant_under_increasing_transform(
        scores in prop::collection::vec((0.0f64..1.0, any::<bool>()), 2..80),
    ) {
        prop_assume!(scores.iter().any(|s| s.1) && scores.iter().any(|s| !s.1));
        let cubed: Vec<(f64, bool)> = scores.iter().map(|&(s, t)| (3.0 * s * s * s + 1.0, t)).collect();
        prop_assert_eq!(auc(&scores).unwrap(), auc(&cubed).unwrap());
    }

    #[test]
    fn auc_label_flip_complements(
        scores in prop::collection::vec((0.0f64..1.0, any::<bool>()), 2..80),
    ) {
        prop_assume!(scores.iter().any(|s| s.1) && scores.iter().any(|s| !s.1));
        let mut sorted: Vec<f64> = scores.iter().map(|s| s.0).collect();
        sorted.sort_by(f64::total_cmp);
        prop_assume!(sorted.windows(2).all(|w| w[0] < w[1]));
        let flipped: Vec<(f64, bool)> = scores.iter().map(|&(s, t)| (s, !t)).collect();
        let sum = auc(&scores).unwrap() + auc(&flipped).unwrap();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn decisions_are_consistent(
        regions in prop::collection::vec(
            (prop::collection::vec(0.0f64..=1.0, 3), 1e-3f64..1.0), 1..5),
        v in prop::collection::vec(0.0f64..=1.0, 3),
    ) {
        let regions: Vec<FuzzyRegion> = regions
            .into_iter()
            .map(|(representative, tau)| FuzzyRegion { representative, tau, members: vec![] })
            .collect();
        for t in [TConorm::Max, TConorm::ProbabilisticSum] {
            let s = soft_decision(&regions, t, &v);
            prop_assert!((0.0..=1.0).contains(&s));
            if hard_decision(&regions, &v) {
                prop_assert!(s >= (-0.5f64).exp());
            }
        }
        for r in &regions {
            let m = membership(r, &v);
            prop_assert!((0.0..=1.0).contains(&m));
        }
    }
}

#[test]
fn normalized_modularity_endpoints() {
    assert_eq!(normalize_modularity(1.0).unwrap(), 1.0);
    assert_eq!(normalize_modularity(-0.5).unwrap(), 0.0);
    assert!(normalize_modularity(1.1).is_err());
    assert!(normalize_modularity(-0.6).is_err());
}
