//! Complete Euclidean graph over embedded patterns, its minimum spanning tree
//! and the MST-based Rényi entropy estimator.

use std::f64::consts::{E, PI};

use rayon::prelude::*;

use crate::dissimilarity::DissimilarityMatrix;
use crate::error::{Error, Result};
use crate::union_find::DisjointSet;

/// Default exponent applied to MST edge weights.
pub const DEFAULT_GAMMA: f64 = 0.02;

/// Normalized Euclidean distance `sqrt(mean_k (a_k - b_k)^2)`, clamped to `[0, 1]`.
///
/// This is the metric of the dissimilarity space; graph edge weights and
/// fuzzy memberships are both measured with it.
pub fn ds_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.is_empty() {
        return 0.0;
    }
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (sum / a.len() as f64).sqrt().min(1.0)
}

/// Complete weighted graph; `weight(i, j)` is the DS distance of rows `i` and `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanGraph {
    n: usize,
    dim: usize,
    weights: Vec<f64>,
}

impl EuclideanGraph {
    /// Builds a graph from an explicit symmetric weight matrix.
    pub fn from_weights(weights: Vec<Vec<f64>>, dim: usize) -> Result<Self> {
        let n = weights.len();
        if let Some(row) = weights.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension {
                expected: n,
                found: row.len(),
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in weights.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::Parameter(format!("weight ({i}, {j}) = {w} outside [0, 1]")));
                }
                if w != weights[j][i] || (i == j && w != 0.0) {
                    return Err(Error::Parameter(format!(
                        "weight matrix must be symmetric with zero diagonal at ({i}, {j})"
                    )));
                }
            }
            flat.extend_from_slice(row);
        }
        if dim == 0 {
            return Err(Error::Parameter("graph dimension must be positive".into()));
        }
        Ok(EuclideanGraph { n, dim, weights: flat })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Dimensionality of the space the vertices live in.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.weights[i * self.n..(i + 1) * self.n]
    }
}

/// Complete graph over the rows of an embedding.
pub fn build_graph(embedding: &DissimilarityMatrix) -> Result<EuclideanGraph> {
    let n = embedding.rows();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, found: n });
    }
    if embedding.cols() == 0 {
        return Err(Error::Dimension { expected: 1, found: 0 });
    }
    let mut weights: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = embedding.row(i);
            (0..n).map(move |j| if j > i { ds_distance(a, embedding.row(j)) } else { 0.0 })
        })
        .collect();
    for i in 0..n {
        for j in 0..i {
            weights[i * n + j] = weights[j * n + i];
        }
    }
    Ok(EuclideanGraph {
        n,
        dim: embedding.cols(),
        weights,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    pub edges: Vec<TreeEdge>,
    pub gamma: f64,
    /// `sum weight^gamma` over the tree edges, with `0^gamma = 0`.
    pub gamma_length: f64,
}

impl SpanningTree {
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Edges in pruning order: non-increasing weight, ties by `(a, b)`.
    pub fn edges_by_decreasing_weight(&self) -> Vec<TreeEdge> {
        let mut edges = self.edges.clone();
        edges.sort_by(|x, y| {
            y.weight
                .total_cmp(&x.weight)
                .then(x.a.cmp(&y.a))
                .then(x.b.cmp(&y.b))
        });
        edges
    }
}

/// `sum w^gamma` with the `0^gamma = 0` convention.
pub fn gamma_length(weights: impl IntoIterator<Item = f64>, gamma: f64) -> f64 {
    weights
        .into_iter()
        .map(|w| if w > 0.0 { w.powf(gamma) } else { 0.0 })
        .sum()
}

/// Kruskal's algorithm; edges are considered in `(weight, i, j)` order.
pub fn minimum_spanning_tree(g: &EuclideanGraph, gamma: f64) -> Result<SpanningTree> {
    let n = g.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, found: n });
    }
    if !(gamma > 0.0 && gamma < g.dim() as f64) {
        return Err(Error::Parameter(format!(
            "gamma {gamma} must lie in (0, {})",
            g.dim()
        )));
    }
    let mut candidates: Vec<TreeEdge> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            candidates.push(TreeEdge {
                a: i,
                b: j,
                weight: g.weight(i, j),
            });
        }
    }
    candidates.sort_unstable_by(|x, y| {
        x.weight
            .total_cmp(&y.weight)
            .then(x.a.cmp(&y.a))
            .then(x.b.cmp(&y.b))
    });
    let mut sets = DisjointSet::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for e in candidates {
        if sets.union(e.a, e.b) {
            edges.push(e);
            if edges.len() == n - 1 {
                break;
            }
        }
    }
    let gamma_length = gamma_length(edges.iter().map(|e| e.weight), gamma);
    Ok(SpanningTree {
        edges,
        gamma,
        gamma_length,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub value: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub beta_term: f64,
    /// Set when `beta_term <= 0`, i.e. `d < 2*pi*e`; `ln(beta)` is then left out.
    pub degenerate_beta: bool,
}

/// Rényi entropy of order `alpha = (d - gamma) / d` estimated from the MST length:
/// `(d / gamma) * [ln(L_gamma / n^alpha) - ln(beta)]`,
/// with `beta = (gamma / 2) * ln(d / (2 pi e))`.
pub fn renyi_entropy(t: &SpanningTree, n: usize, d: usize, gamma: f64) -> Result<EntropyEstimate> {
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, found: n });
    }
    let df = d as f64;
    if !(gamma > 0.0 && gamma < df) {
        return Err(Error::Parameter(format!("gamma {gamma} must lie in (0, {d})")));
    }
    if !(t.gamma_length > 0.0) {
        return Err(Error::DegenerateData(
            "MST length is zero: all points coincide".into(),
        ));
    }
    let alpha = (df - gamma) / df;
    let beta_term = gamma / 2.0 * (df / (2.0 * PI * E)).ln();
    let degenerate_beta = beta_term <= 0.0;
    let mut inner = (t.gamma_length / (n as f64).powf(alpha)).ln();
    if !degenerate_beta {
        inner -= beta_term.ln();
    }
    Ok(EntropyEstimate {
        value: df / gamma * inner,
        alpha,
        gamma,
        beta_term,
        degenerate_beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree_with_length(l: f64) -> SpanningTree {
        SpanningTree {
            edges: vec![],
            gamma: DEFAULT_GAMMA,
            gamma_length: l,
        }
    }

    #[test]
    fn identical_rows_give_zero_edge() {
        let m = DissimilarityMatrix::from_rows(vec![vec![0.3, 0.1], vec![0.3, 0.1]]).unwrap();
        let g = build_graph(&m).unwrap();
        assert_eq!(g.weight(0, 1), 0.0);
    }

    #[test]
    fn opposite_corners_have_unit_weight() {
        let m = DissimilarityMatrix::from_rows(vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let g = build_graph(&m).unwrap();
        assert!((g.weight(0, 1) - 1.0).abs() < 1e-15);
        assert_eq!(g.dim(), 2);
    }

    #[test]
    fn graph_needs_two_rows() {
        let m = DissimilarityMatrix::from_rows(vec![vec![0.0]]).unwrap();
        assert!(matches!(build_graph(&m), Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn three_vertex_mst() {
        let g = EuclideanGraph::from_weights(
            vec![vec![0.0, 0.1, 0.9], vec![0.1, 0.0, 0.2], vec![0.9, 0.2, 0.0]],
            3,
        )
        .unwrap();
        let t = minimum_spanning_tree(&g, 1.0).unwrap();
        assert_eq!(t.edges.len(), 2);
        assert!((t.total_weight() - 0.3).abs() < 1e-15);
        assert!((t.gamma_length - 0.3).abs() < 1e-15);
    }

    #[test]
    fn two_vertex_mst() {
        let g = EuclideanGraph::from_weights(vec![vec![0.0, 0.4], vec![0.4, 0.0]], 2).unwrap();
        let t = minimum_spanning_tree(&g, 0.5).unwrap();
        assert_eq!(t.edges, vec![TreeEdge { a: 0, b: 1, weight: 0.4 }]);
        assert!((t.gamma_length - 0.4f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gamma_must_be_below_dimension() {
        let g = EuclideanGraph::from_weights(vec![vec![0.0, 0.4], vec![0.4, 0.0]], 2).unwrap();
        assert!(minimum_spanning_tree(&g, 2.0).is_err());
        assert!(minimum_spanning_tree(&g, 0.0).is_err());
    }

    #[test]
    fn zero_weights_do_not_contribute() {
        assert_eq!(gamma_length([0.0, 0.0, 0.5], 0.02), 0.5f64.powf(0.02));
    }

    #[test]
    fn alpha_from_dimension() {
        let e = renyi_entropy(&tree_with_length(9.0), 10, 100, 0.02).unwrap();
        assert!((e.alpha - 0.9998).abs() < 1e-15);
    }

    #[test]
    fn entropy_matches_closed_form() {
        let e = renyi_entropy(&tree_with_length(9.0), 10, 100, 0.02).unwrap();
        let expected = 5000.0
            * ((9.0 / 10f64.powf(0.9998)).ln() - (0.01 * (100.0 / (2.0 * PI * E)).ln()).ln());
        assert!(!e.degenerate_beta);
        assert!(((e.value - expected) / expected).abs() < 1e-9);
    }

    #[test]
    fn low_dimension_flags_beta() {
        let e = renyi_entropy(&tree_with_length(2.0), 5, 4, 0.02).unwrap();
        assert!(e.beta_term < 0.0);
        assert!(e.degenerate_beta);
        let expected = 4.0 / 0.02 * (2.0 / 5f64.powf(e.alpha)).ln();
        assert!((e.value - expected).abs() < 1e-9);
    }

    #[test]
    fn zero_length_is_degenerate() {
        assert!(matches!(
            renyi_entropy(&tree_with_length(0.0), 5, 30, 0.02),
            Err(Error::DegenerateData(_))
        ));
    }
}
