#![allow(dead_code)]

pub mod oracle;

use eocc::graph::EuclideanGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complete graph with independent uniform weights in `[0, 1)`.
pub fn random_graph(n: usize, rng: &mut impl Rng) -> EuclideanGraph {
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x: f64 = rng.random();
            w[i][j] = x;
            w[j][i] = x;
        }
    }
    EuclideanGraph::from_weights(w, n).unwrap()
}

/// Relabels clusters in order of first appearance, so labels are `0..k`.
pub fn compact(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

pub fn random_partition(n: usize, k_max: usize, rng: &mut impl Rng) -> Vec<usize> {
    let raw: Vec<usize> = (0..n).map(|_| rng.random_range(0..k_max)).collect();
    compact(&raw)
}
