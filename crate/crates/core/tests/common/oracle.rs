//! Library results checked against independent brute-force computations.
//! Each check panics on the first mismatch.

use super::{random_graph, random_partition, rng};
use eocc::graph::{minimum_spanning_tree, EuclideanGraph};
use eocc::metrics::auc;
use eocc::partition::{
    connected_components, greedy_edge_pruning, greedy_edge_pruning_with, modularity_edge_form,
    modularity_vertex_form, PruningOptions,
};
use rand::Rng;

fn all_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn is_spanning_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    edges.len() == n - 1 && connected_components(edges, n).iter().all(|&c| c == 0)
}

/// Every spanning tree of the complete graph, by subset enumeration.
fn spanning_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    let edges = all_edges(n);
    let mut out = Vec::new();
    for mask in 0u32..(1 << edges.len()) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let chosen: Vec<(usize, usize)> = (0..edges.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| edges[b])
            .collect();
        if is_spanning_tree(n, &chosen) {
            out.push(chosen);
        }
    }
    out
}

fn tree_cost(g: &EuclideanGraph, edges: &[(usize, usize)]) -> f64 {
    edges.iter().map(|&(i, j)| g.weight(i, j)).sum()
}

pub fn mst_matches_exhaustive_enumeration() {
    let mut r = rng(7);
    for n in 2..=6 {
        let trees = spanning_trees(n);
        assert_eq!(trees.len(), n.pow(n as u32 - 2), "Cayley count for n = {n}");
        for _ in 0..40 {
            let g = random_graph(n, &mut r);
            let best = trees
                .iter()
                .min_by(|a, b| tree_cost(&g, a).total_cmp(&tree_cost(&g, b)))
                .unwrap();
            let mut expected = best.clone();
            expected.sort_unstable();

            let t = minimum_spanning_tree(&g, 0.5).unwrap();
            let mut got: Vec<(usize, usize)> = t.edges.iter().map(|e| (e.a.min(e.b), e.a.max(e.b))).collect();
            got.sort_unstable();
            assert_eq!(got, expected, "n = {n}");
        }
    }
}

pub fn mst_total_weight_is_minimal_with_ties() {
    // weights from a tiny alphabet force many equal-cost trees
    let mut r = rng(8);
    for n in 3..=6 {
        let trees = spanning_trees(n);
        for _ in 0..40 {
            let mut w = vec![vec![0.0; n]; n];
            for (i, j) in all_edges(n) {
                let x = r.random_range(1..4) as f64 / 4.0;
                w[i][j] = x;
                w[j][i] = x;
            }
            let g = EuclideanGraph::from_weights(w, n).unwrap();
            let best = trees.iter().map(|t| tree_cost(&g, t)).fold(f64::INFINITY, f64::min);
            let t = minimum_spanning_tree(&g, 0.5).unwrap();
            let got: Vec<(usize, usize)> = t.edges.iter().map(|e| (e.a, e.b)).collect();
            assert!(is_spanning_tree(n, &got));
            // quarter multiples sum exactly
            assert_eq!(t.total_weight(), best);
        }
    }
}

pub fn modularity_edge_form_matches_vertex_form() {
    let mut r = rng(11);
    for n in 2..=12 {
        for _ in 0..50 {
            let g = random_graph(n, &mut r);
            let k_max = r.random_range(1..=n);
            let a = random_partition(n, k_max, &mut r);
            let e = modularity_edge_form(&g, &a).unwrap();
            let v = modularity_vertex_form(&g, &a).unwrap();
            assert!((e - v).abs() <= 1e-12, "n = {n}: {e} vs {v}");
        }
    }
}

fn brute_auc(scores: &[(f64, bool)]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for &(sp, tp) in scores {
        if !tp {
            continue;
        }
        for &(sn, tn) in scores {
            if tn {
                continue;
            }
            pairs += 1.0;
            if sp > sn {
                wins += 1.0;
            } else if sp == sn {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

pub fn auc_matches_pair_counting() {
    let mut r = rng(12);
    for case in 0..300 {
        let len = r.random_range(2..=200);
        // small score alphabets in half the cases to exercise ties
        let levels = if case % 2 == 0 { 5 } else { 1_000_000 };
        let mut scores: Vec<(f64, bool)> = (0..len)
            .map(|_| (r.random_range(0..levels) as f64 / levels as f64, r.random::<bool>()))
            .collect();
        scores[0].1 = true;
        scores[1].1 = false;
        assert_eq!(auc(&scores).unwrap(), brute_auc(&scores), "case {case}");
    }
}

/// Modularity after removing the `i` heaviest tree edges, recomputed from scratch.
fn prefix_modularities(g: &EuclideanGraph, gamma: f64) -> Vec<f64> {
    let t = minimum_spanning_tree(g, gamma).unwrap();
    let order = t.edges_by_decreasing_weight();
    let n = g.len();
    (1..n)
        .map(|i| {
            let kept: Vec<(usize, usize)> = order[i..].iter().map(|e| (e.a, e.b)).collect();
            modularity_vertex_form(g, &connected_components(&kept, n)).unwrap()
        })
        .collect()
}

pub fn pruning_returns_best_prefix_before_first_decrease() {
    let mut r = rng(13);
    for n in 2..=10 {
        for _ in 0..60 {
            let g = random_graph(n, &mut r);
            let qs = prefix_modularities(&g, 0.5);
            let mut best = -1.0f64;
            for &q in &qs {
                if q < best {
                    break;
                }
                best = q;
            }
            let t = minimum_spanning_tree(&g, 0.5).unwrap();
            let got = greedy_edge_pruning(&g, &t).unwrap();
            assert!((got.modularity_q() - best).abs() <= 1e-12, "n = {n}");

            let outcome = greedy_edge_pruning_with(&g, &t, PruningOptions::default()).unwrap();
            for (i, &(k, q)) in outcome.curve.iter().enumerate() {
                assert_eq!(k, i + 2);
                assert!((q - qs[i]).abs() <= 1e-12);
            }
        }
    }
}
