//! Parametric dissimilarity measures and the dissimilarity-space embedding.
//!
//! Every pattern is mapped to the vector of its dissimilarities to a
//! representation set. The resulting matrix rows are the coordinates used by
//! the rest of the pipeline, so any input domain with a dissimilarity measure
//! can be processed the same way.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// A vertex of a labeled graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: u64,
    pub label: Vec<f64>,
}

/// An undirected labeled edge, endpoints given as vertex ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub src: u64,
    pub dst: u64,
    pub label: Vec<f64>,
}

/// Graph pattern with real-vector labels on vertices and edges.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabeledGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl LabeledGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let mut ids = HashSet::with_capacity(vertices.len());
        for v in &vertices {
            if !ids.insert(v.id) {
                return Err(Error::Domain(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            for end in [e.src, e.dst] {
                if !ids.contains(&end) {
                    return Err(Error::Domain(format!(
                        "edge ({}, {}) references unknown vertex {end}",
                        e.src, e.dst
                    )));
                }
            }
            let key = (e.src.min(e.dst), e.src.max(e.dst));
            if !seen.insert(key) {
                return Err(Error::Domain(format!(
                    "duplicate undirected edge ({}, {})",
                    key.0, key.1
                )));
            }
        }
        Ok(LabeledGraph { vertices, edges })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn index_of(&self, id: u64) -> usize {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .expect("edge endpoints validated at construction")
    }
}

/// A pattern from one of the supported input domains.
#[derive(Debug, Clone, PartialEq)]
pub enum Pattern {
    Features(Vec<f64>),
    Graph(LabeledGraph),
}

impl Pattern {
    pub fn domain(&self) -> Domain {
        match self {
            Pattern::Features(_) => Domain::Features,
            Pattern::Graph(_) => Domain::Graph,
        }
    }

    pub fn as_features(&self) -> Option<&[f64]> {
        match self {
            Pattern::Features(v) => Some(v),
            Pattern::Graph(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Features,
    Graph,
}

/// Parameters of a dissimilarity measure; every entry lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Params(Vec<f64>);

impl Params {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Parameter(format!("entry {bad} outside [0, 1]")));
        }
        Ok(Params(values))
    }

    pub fn ones(len: usize) -> Self {
        Params(vec![1.0; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Selects the dissimilarity measure used for embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Weighted, dimension-normalized Euclidean distance over feature vectors.
    WeightedEuclidean,
    /// Greedy-assignment graph edit distance with insertion/deletion/substitution weights.
    GraphEdit,
}

/// Number of parameters of the graph edit measure.
pub const GRAPH_EDIT_PARAMS: usize = 3;

impl Measure {
    pub fn domain(self) -> Domain {
        match self {
            Measure::WeightedEuclidean => Domain::Features,
            Measure::GraphEdit => Domain::Graph,
        }
    }

    /// Number of parameters the measure takes for the given patterns.
    pub fn param_count(self, patterns: &[Pattern]) -> Result<usize> {
        match self {
            Measure::GraphEdit => Ok(GRAPH_EDIT_PARAMS),
            Measure::WeightedEuclidean => match patterns.first() {
                Some(Pattern::Features(v)) => Ok(v.len()),
                Some(Pattern::Graph(_)) => Err(Error::Domain(
                    "weighted Euclidean measure applied to graph patterns".into(),
                )),
                None => Err(Error::EmptyDataset),
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::WeightedEuclidean => "weighted_euclidean",
            Measure::GraphEdit => "graph_edit",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "weighted_euclidean" => Some(Measure::WeightedEuclidean),
            "graph_edit" => Some(Measure::GraphEdit),
            _ => None,
        }
    }

    pub fn distance(self, a: &Pattern, b: &Pattern, p: &Params) -> Result<f64> {
        match (self, a, b) {
            (Measure::WeightedEuclidean, Pattern::Features(x), Pattern::Features(y)) => {
                weighted_euclidean(x, y, p)
            }
            (Measure::GraphEdit, Pattern::Graph(g1), Pattern::Graph(g2)) => {
                greedy_graph_edit_distance(g1, g2, p)
            }
            _ => Err(Error::Domain(format!(
                "{} measure cannot compare {:?} with {:?} patterns",
                self.name(),
                a.domain(),
                b.domain()
            ))),
        }
    }
}

/// `sqrt((1/u) * sum_i p_i (a_i - b_i)^2)`.
pub fn weighted_euclidean(a: &[f64], b: &[f64], p: &Params) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    if p.len() != a.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: p.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::Dimension {
            expected: 1,
            found: 0,
        });
    }
    let sum: f64 = a
        .iter()
        .zip(b)
        .zip(p.values())
        .map(|((x, y), w)| w * (x - y) * (x - y))
        .sum();
    Ok((sum / a.len() as f64).sqrt())
}

fn label_distance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let d = a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn label_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Greedy graph edit distance.
///
/// Vertex pairs are matched greedily by ascending substitution cost (label
/// distance), ties going to the lowest `(g1 index, g2 index)` pair, so
/// identically labeled vertices are always matched first. Unmatched vertices
/// of `g1` are deleted and unmatched vertices of `g2` are inserted at a cost of
/// `1 + |label|`. Edges are then compared under the induced vertex mapping.
///
/// `p = (w_ins, w_del, w_sub)`.
pub fn greedy_graph_edit_distance(g1: &LabeledGraph, g2: &LabeledGraph, p: &Params) -> Result<f64> {
    if p.len() != GRAPH_EDIT_PARAMS {
        return Err(Error::Parameter(format!(
            "graph edit distance takes {GRAPH_EDIT_PARAMS} parameters, got {}",
            p.len()
        )));
    }
    let (w_ins, w_del, w_sub) = (p.values()[0], p.values()[1], p.values()[2]);
    let (n1, n2) = (g1.vertices.len(), g2.vertices.len());

    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n1 * n2);
    for (i, u) in g1.vertices.iter().enumerate() {
        for (j, v) in g2.vertices.iter().enumerate() {
            pairs.push((label_distance(&u.label, &v.label), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut forward: Vec<Option<usize>> = vec![None; n1];
    let mut taken = vec![false; n2];
    let mut cost = 0.0;
    let mut matched = 0;
    for (c, i, j) in pairs {
        if matched == n1.min(n2) {
            break;
        }
        if forward[i].is_none() && !taken[j] {
            forward[i] = Some(j);
            taken[j] = true;
            matched += 1;
            cost += w_sub * c;
        }
    }
    for (i, v) in g1.vertices.iter().enumerate() {
        if forward[i].is_none() {
            cost += w_del * (1.0 + label_norm(&v.label));
        }
    }
    for (j, v) in g2.vertices.iter().enumerate() {
        if !taken[j] {
            cost += w_ins * (1.0 + label_norm(&v.label));
        }
    }

    // Edges of g2 keyed by unordered vertex-index pair.
    let mut g2_edges: Vec<((usize, usize), &[f64], bool)> = g2
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (g2.index_of(e.src), g2.index_of(e.dst));
            ((a.min(b), a.max(b)), e.label.as_slice(), false)
        })
        .collect();
    g2_edges.sort_by_key(|e| e.0);

    for e in &g1.edges {
        let (a, b) = (g1.index_of(e.src), g1.index_of(e.dst));
        let image = match (forward[a], forward[b]) {
            (Some(x), Some(y)) => g2_edges.binary_search_by_key(&(x.min(y), x.max(y)), |e| e.0).ok(),
            _ => None,
        };
        match image {
            Some(k) => {
                g2_edges[k].2 = true;
                cost += w_sub * label_distance(&e.label, g2_edges[k].1);
            }
            None => cost += w_del * (1.0 + label_norm(&e.label)),
        }
    }
    for (_, label, used) in &g2_edges {
        if !used {
            cost += w_ins * (1.0 + label_norm(label));
        }
    }
    Ok(cost)
}

/// Dense row-major `rows x cols` matrix of dissimilarities.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DissimilarityMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    found: r.len(),
                });
            }
            if let Some(bad) = r.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(Error::Parameter(format!("invalid dissimilarity {bad}")));
            }
            data.extend(r);
        }
        Ok(DissimilarityMatrix { rows: n, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Divides every entry by `normalizer` and clamps to `[0, 1]`.
    fn scale(&mut self, normalizer: f64) {
        for x in &mut self.data {
            *x = (*x / normalizer).min(1.0);
        }
    }
}

fn check_domain(measure: Measure, patterns: &[Pattern]) -> Result<()> {
    let domain = measure.domain();
    match patterns.iter().find(|p| p.domain() != domain) {
        Some(p) => Err(Error::Domain(format!(
            "{} measure expects {:?} patterns, got {:?}",
            measure.name(),
            domain,
            p.domain()
        ))),
        None => Ok(()),
    }
}

/// Raw (unnormalized) dissimilarities `D_ij = d(patterns[i], reps[j])`.
///
/// Rows are computed in parallel; each entry depends only on its own pair so
/// the result is identical to a sequential evaluation.
pub fn dissimilarities(
    patterns: &[Pattern],
    reps: &[Pattern],
    p: &Params,
    measure: Measure,
) -> Result<DissimilarityMatrix> {
    if reps.is_empty() {
        return Err(Error::Configuration("representation set is empty".into()));
    }
    check_domain(measure, reps)?;
    check_domain(measure, patterns)?;
    let rows: Vec<Vec<f64>> = patterns
        .par_iter()
        .map(|x| reps.iter().map(|r| measure.distance(x, r, p)).collect())
        .collect::<Result<_>>()?;
    DissimilarityMatrix::from_rows(rows)
}

/// Embedding normalized by its own maximum entry.
///
/// Returns the matrix and the normalizer used; an all-zero matrix keeps a
/// normalizer of 1.
pub fn embed(
    patterns: &[Pattern],
    reps: &[Pattern],
    p: &Params,
    measure: Measure,
) -> Result<(DissimilarityMatrix, f64)> {
    let mut d = dissimilarities(patterns, reps, p, measure)?;
    let max = d.max_entry();
    let normalizer = if max > 0.0 { max } else { 1.0 };
    d.scale(normalizer);
    Ok((d, normalizer))
}

/// Embedding divided by a stored normalizer and clamped to `[0, 1]`.
pub fn embed_with_normalizer(
    patterns: &[Pattern],
    reps: &[Pattern],
    p: &Params,
    measure: Measure,
    normalizer: f64,
) -> Result<DissimilarityMatrix> {
    if !(normalizer > 0.0 && normalizer.is_finite()) {
        return Err(Error::Parameter(format!("normalizer {normalizer} must be positive")));
    }
    let mut d = dissimilarities(patterns, reps, p, measure)?;
    d.scale(normalizer);
    Ok(d)
}
