//! Fuzzy decision regions and the soft/hard decision functions.

use crate::data::Standardizer;
use crate::dissimilarity::{embed_with_normalizer, DissimilarityMatrix, Measure, Params, Pattern};
use crate::error::{Error, Result};
use crate::graph::{ds_distance, SpanningTree};
use crate::partition::Partition;

/// Width used when a whole spanning tree has zero length.
pub const TAU_FLOOR: f64 = 1e-6;

/// A decision region: a Gaussian fuzzy set around a cluster representative.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRegion {
    pub representative: Vec<f64>,
    pub tau: f64,
    pub members: Vec<usize>,
}

/// Aggregation of per-region memberships into a single score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TConorm {
    #[default]
    Max,
    ProbabilisticSum,
}

impl TConorm {
    pub fn name(self) -> &'static str {
        match self {
            TConorm::Max => "max",
            TConorm::ProbabilisticSum => "probabilistic_sum",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "max" => Some(TConorm::Max),
            "probabilistic_sum" => Some(TConorm::ProbabilisticSum),
            _ => None,
        }
    }

    pub fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            TConorm::Max => a.max(b),
            TConorm::ProbabilisticSum => a + b - a * b,
        }
    }
}

/// How a region's width is derived from its cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauRule {
    /// Mean weight of the MST edges lying inside the cluster.
    #[default]
    MstEdges,
    /// Root mean square of all intra-cluster pairwise distances, obtained in
    /// linear time from the spread around the centroid.
    PairwiseRms,
}

impl TauRule {
    pub fn name(self) -> &'static str {
        match self {
            TauRule::MstEdges => "mst_edges",
            TauRule::PairwiseRms => "pairwise_rms",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "mst_edges" => Some(TauRule::MstEdges),
            "pairwise_rms" => Some(TauRule::PairwiseRms),
            _ => None,
        }
    }
}

/// [`fuzzify_with`] under [`TauRule::MstEdges`].
pub fn fuzzify(embedding: &DissimilarityMatrix, tree: &SpanningTree, partition: &Partition) -> Vec<FuzzyRegion> {
    fuzzify_with(embedding, tree, partition, TauRule::MstEdges)
}

/// One region per cluster, represented by the centroid of the cluster's
/// embedding rows, with width given by `rule`.
///
/// Clusters whose width comes out zero (singletons, coincident points) fall
/// back to the mean MST edge weight, or [`TAU_FLOOR`] if the tree has zero
/// length.
pub fn fuzzify_with(
    embedding: &DissimilarityMatrix,
    tree: &SpanningTree,
    partition: &Partition,
    rule: TauRule,
) -> Vec<FuzzyRegion> {
    let assignment = partition.assignment();
    let mean_edge = if tree.edges.is_empty() {
        0.0
    } else {
        tree.total_weight() / tree.edges.len() as f64
    };
    let fallback = if mean_edge > 0.0 { mean_edge } else { TAU_FLOOR };

    let k = partition.k();
    let mut sums = vec![0.0; k];
    let mut counts = vec![0usize; k];
    for e in &tree.edges {
        let c = assignment[e.a];
        if assignment[e.b] == c {
            sums[c] += e.weight;
            counts[c] += 1;
        }
    }

    partition
        .clusters()
        .into_iter()
        .enumerate()
        .map(|(c, members)| {
            let mut centroid = vec![0.0; embedding.cols()];
            for &m in &members {
                for (acc, x) in centroid.iter_mut().zip(embedding.row(m)) {
                    *acc += x;
                }
            }
            for acc in &mut centroid {
                *acc /= members.len() as f64;
            }
            let tau = match rule {
                TauRule::MstEdges if counts[c] > 0 => sums[c] / counts[c] as f64,
                TauRule::MstEdges => 0.0,
                TauRule::PairwiseRms if members.len() > 1 => {
                    let m = members.len() as f64;
                    let spread = members
                        .iter()
                        .map(|&i| ds_distance(embedding.row(i), &centroid).powi(2))
                        .sum::<f64>()
                        / m;
                    (2.0 * m / (m - 1.0) * spread).sqrt()
                }
                TauRule::PairwiseRms => 0.0,
            };
            FuzzyRegion {
                representative: centroid,
                tau: if tau > 0.0 { tau } else { fallback },
                members,
            }
        })
        .collect()
}

/// Gaussian membership `exp(-d^2 / (2 tau^2))` of `v` to the region.
pub fn membership(region: &FuzzyRegion, v: &[f64]) -> f64 {
    let d = ds_distance(v, &region.representative);
    (-(d * d) / (2.0 * region.tau * region.tau)).exp()
}

/// T-conorm of all memberships.
pub fn soft_decision(regions: &[FuzzyRegion], tconorm: TConorm, v: &[f64]) -> f64 {
    regions
        .iter()
        .map(|r| membership(r, v))
        .fold(0.0, |acc, m| tconorm.combine(acc, m))
}

/// Accepts `v` iff it lies within `tau` of the representative of the region
/// where its membership is highest (ties to the lowest region index).
pub fn hard_decision(regions: &[FuzzyRegion], v: &[f64]) -> bool {
    let mut best: Option<(usize, f64)> = None;
    for (i, r) in regions.iter().enumerate() {
        let m = membership(r, v);
        if best.is_none_or(|(_, b)| m > b) {
            best = Some((i, m));
        }
    }
    match best {
        Some((i, _)) => ds_distance(v, &regions[i].representative) <= regions[i].tau,
        None => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub soft: f64,
    pub hard: bool,
}

/// A trained one-class classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct OccModel {
    pub measure: Measure,
    pub params: Params,
    /// Representation set, stored as seen by the measure (after any feature scaling).
    pub reps: Vec<Pattern>,
    pub normalizer: f64,
    pub regions: Vec<FuzzyRegion>,
    pub tconorm: TConorm,
    /// Feature standardization applied to raw inputs before embedding.
    pub scaling: Option<Standardizer>,
}

impl OccModel {
    pub fn validate(&self) -> Result<()> {
        if self.regions.is_empty() {
            return Err(Error::Configuration("model has no decision regions".into()));
        }
        if self.reps.is_empty() {
            return Err(Error::Configuration("model has an empty representation set".into()));
        }
        if let Some(r) = self.regions.iter().find(|r| r.representative.len() != self.reps.len()) {
            return Err(Error::Dimension {
                expected: self.reps.len(),
                found: r.representative.len(),
            });
        }
        if let Some(r) = self.regions.iter().find(|r| !(r.tau > 0.0)) {
            return Err(Error::Parameter(format!("region width {} must be positive", r.tau)));
        }
        Ok(())
    }

    pub fn soft_decision(&self, v: &[f64]) -> f64 {
        soft_decision(&self.regions, self.tconorm, v)
    }

    pub fn hard_decision(&self, v: &[f64]) -> bool {
        hard_decision(&self.regions, v)
    }

    /// Dissimilarity vectors of raw patterns against the representation set.
    pub fn embed(&self, patterns: &[Pattern]) -> Result<DissimilarityMatrix> {
        let scaled;
        let patterns = match &self.scaling {
            Some(s) => {
                scaled = patterns.iter().map(|p| s.apply(p)).collect::<Result<Vec<_>>>()?;
                &scaled[..]
            }
            None => patterns,
        };
        self.embed_prepared(patterns)
    }

    /// Like [`OccModel::embed`] for patterns that already went through the
    /// model's feature scaling.
    pub fn embed_prepared(&self, patterns: &[Pattern]) -> Result<DissimilarityMatrix> {
        embed_with_normalizer(patterns, &self.reps, &self.params, self.measure, self.normalizer)
    }

    pub fn classify(&self, x: &Pattern) -> Result<Decision> {
        Ok(self.classify_batch(std::slice::from_ref(x))?[0])
    }

    pub fn classify_batch(&self, xs: &[Pattern]) -> Result<Vec<Decision>> {
        self.decide(&self.embed(xs)?)
    }

    /// Decisions for patterns already in the scaled input space.
    pub fn classify_prepared(&self, xs: &[Pattern]) -> Result<Vec<Decision>> {
        self.decide(&self.embed_prepared(xs)?)
    }

    fn decide(&self, d: &DissimilarityMatrix) -> Result<Vec<Decision>> {
        Ok(d.iter_rows()
            .map(|v| Decision {
                soft: self.soft_decision(v),
                hard: self.hard_decision(v),
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, minimum_spanning_tree};

    fn region(rep: Vec<f64>, tau: f64) -> FuzzyRegion {
        FuzzyRegion {
            representative: rep,
            tau,
            members: vec![],
        }
    }

    #[test]
    fn membership_profile() {
        let r = region(vec![0.0, 0.0], 0.2);
        assert_eq!(membership(&r, &[0.0, 0.0]), 1.0);
        // DS distance of (0.2, 0.2) from the origin is exactly 0.2
        let m = membership(&r, &[0.2, 0.2]);
        assert!((m - (-0.5f64).exp()).abs() < 1e-12);
        let mut last = 1.0;
        for step in 1..20 {
            let x = step as f64 * 0.05;
            let m = membership(&r, &[x, x]);
            assert!(m < last);
            last = m;
        }
        assert!((last - (-0.95f64 * 0.95 / 0.08).exp()).abs() < 1e-15);
    }

    #[test]
    fn soft_decision_tconorms() {
        let rs = vec![region(vec![0.0], 0.1), region(vec![1.0], 0.1)];
        assert_eq!(soft_decision(&rs, TConorm::Max, &[1.0]), 1.0);
        let a = membership(&rs[0], &[0.45]);
        let b = membership(&rs[1], &[0.45]);
        assert_eq!(soft_decision(&rs, TConorm::Max, &[0.45]), a.max(b));
        let ps = soft_decision(&rs, TConorm::ProbabilisticSum, &[0.45]);
        assert!((ps - (a + b - a * b)).abs() < 1e-15);
        assert_eq!(soft_decision(&rs[..1], TConorm::Max, &[0.3]), membership(&rs[0], &[0.3]));
    }

    #[test]
    fn hard_decision_threshold_is_inclusive() {
        let rs = vec![region(vec![0.0], 0.25)];
        assert!(hard_decision(&rs, &[0.0]));
        assert!(hard_decision(&rs, &[0.25]));
        assert!(!hard_decision(&rs, &[0.5]));
    }

    #[test]
    fn hard_decision_uses_best_region() {
        // v is within the wide region's tau but the narrow region gives it higher membership
        let rs = vec![region(vec![0.5], 0.5), region(vec![0.3], 0.05)];
        let v = [0.31];
        assert!(membership(&rs[1], &v) > membership(&rs[0], &v));
        assert!(hard_decision(&rs, &v));
        let v = [0.2];
        assert!(membership(&rs[0], &v) > membership(&rs[1], &v));
        assert!(hard_decision(&rs, &v));
    }

    fn embedding(rows: Vec<Vec<f64>>) -> DissimilarityMatrix {
        DissimilarityMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn pair_cluster_tau_is_edge_weight() {
        // two DS points at distance 0.4 in one cluster
        let e = embedding(vec![vec![0.0, 0.4], vec![0.4, 0.0]]);
        let g = build_graph(&e).unwrap();
        let t = minimum_spanning_tree(&g, 0.02).unwrap();
        let p = Partition::evaluate(&g, vec![0, 0]).unwrap();
        let rs = fuzzify(&e, &t, &p);
        assert_eq!(rs.len(), 1);
        assert!((rs[0].tau - 0.4).abs() < 1e-12);
        assert_eq!(rs[0].representative, vec![0.2, 0.2]);
    }

    #[test]
    fn singleton_and_coincident_fallbacks() {
        let e = embedding(vec![
            vec![0.0, 0.0, 0.9],
            vec![0.0, 0.0, 0.9],
            vec![0.9, 0.9, 0.0],
        ]);
        let g = build_graph(&e).unwrap();
        let t = minimum_spanning_tree(&g, 0.02).unwrap();
        let p = Partition::evaluate(&g, vec![0, 0, 1]).unwrap();
        let rs = fuzzify(&e, &t, &p);
        let mean = t.total_weight() / 2.0;
        assert!(mean > 0.0);
        assert_eq!(rs[0].tau, mean);
        assert_eq!(rs[1].tau, mean);
        assert_eq!(rs[0].members, vec![0, 1]);
        assert_eq!(rs[1].members, vec![2]);
    }

    #[test]
    fn zero_length_tree_uses_floor() {
        let e = embedding(vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        let g = build_graph(&e).unwrap();
        let t = minimum_spanning_tree(&g, 0.02).unwrap();
        let p = Partition::evaluate(&g, vec![0, 1]).unwrap();
        for r in fuzzify(&e, &t, &p) {
            assert_eq!(r.tau, TAU_FLOOR);
        }
    }
}
