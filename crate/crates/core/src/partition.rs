//! Modularity of vertex partitions and the greedy MST edge-pruning partitioner.
//!
//! Edge weights of the Euclidean graph are distances, so modularity is always
//! evaluated over the complement weights `1 - w_ij`: close vertices contribute
//! strong ties. Self-loops are excluded from every sum.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{EuclideanGraph, SpanningTree};
use crate::union_find::DisjointSet;

/// Tolerance when checking a modularity value against `[-1/2, 1]`.
const MODULARITY_SLACK: f64 = 1e-9;

/// A partition of the graph vertices together with its modularity.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
    modularity_q: f64,
    modularity_m: f64,
}

impl Partition {
    /// Evaluates the modularity of `assignment` on `g`.
    pub fn evaluate(g: &EuclideanGraph, assignment: Vec<usize>) -> Result<Self> {
        let q = modularity_edge_form(g, &assignment)?;
        Self::from_parts(assignment, q)
    }

    fn from_parts(assignment: Vec<usize>, q: f64) -> Result<Self> {
        let k = cluster_count(&assignment)?;
        Ok(Partition {
            assignment,
            k,
            modularity_q: q,
            modularity_m: normalize_modularity(q)?,
        })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Raw modularity `Q` in `[-1/2, 1]`.
    pub fn modularity_q(&self) -> f64 {
        self.modularity_q
    }

    /// Normalized modularity `M` in `[0, 1]`.
    pub fn modularity_m(&self) -> f64 {
        self.modularity_m
    }

    /// Member indices of every cluster, clusters in index order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Validates an assignment and returns its cluster count.
fn cluster_count(assignment: &[usize]) -> Result<usize> {
    let Some(&max) = assignment.iter().max() else {
        return Err(Error::InsufficientData { needed: 1, found: 0 });
    };
    let k = max + 1;
    let mut seen = vec![false; k];
    for &c in assignment {
        seen[c] = true;
    }
    if let Some(empty) = seen.iter().position(|s| !s) {
        return Err(Error::Parameter(format!("cluster {empty} of {k} is empty")));
    }
    Ok(k)
}

fn check_assignment(g: &EuclideanGraph, assignment: &[usize]) -> Result<usize> {
    if assignment.len() != g.len() {
        return Err(Error::Dimension {
            expected: g.len(),
            found: assignment.len(),
        });
    }
    cluster_count(assignment)
}

/// Complement-weight vertex degrees and the total complement weight `|E(G)|`.
fn complement_degrees(g: &EuclideanGraph) -> Result<(Vec<f64>, f64)> {
    let n = g.len();
    let degrees: Vec<f64> = (0..n)
        .map(|i| {
            g.row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, w)| 1.0 - w)
                .sum()
        })
        .collect();
    let total = degrees.iter().sum::<f64>() / 2.0;
    if !(total > 0.0) {
        return Err(Error::UndefinedModularity);
    }
    Ok((degrees, total))
}

/// `Q = sum_l [ |E(C_l)| / |E(G)| - (deg(C_l) / 2|E(G)|)^2 ]` over complement weights.
pub fn modularity_edge_form(g: &EuclideanGraph, assignment: &[usize]) -> Result<f64> {
    let k = check_assignment(g, assignment)?;
    let (degrees, total) = complement_degrees(g)?;
    let mut intra = vec![0.0; k];
    let mut deg = vec![0.0; k];
    for i in 0..g.len() {
        deg[assignment[i]] += degrees[i];
        for j in i + 1..g.len() {
            if assignment[i] == assignment[j] {
                intra[assignment[i]] += 1.0 - g.weight(i, j);
            }
        }
    }
    Ok(intra
        .iter()
        .zip(&deg)
        .map(|(e, d)| e / total - (d / (2.0 * total)).powi(2))
        .sum())
}

/// `Q = 1/(2|E|) sum_ij (A_ij - deg_i deg_j / 2|E|) [c_i == c_j]` over complement
/// weights. Quadratic in the vertex count; kept as a cross-check of the edge form.
pub fn modularity_vertex_form(g: &EuclideanGraph, assignment: &[usize]) -> Result<f64> {
    check_assignment(g, assignment)?;
    let (degrees, total) = complement_degrees(g)?;
    let two_m = 2.0 * total;
    let mut sum = 0.0;
    for i in 0..g.len() {
        for j in 0..g.len() {
            if assignment[i] != assignment[j] {
                continue;
            }
            let a = if i == j { 0.0 } else { 1.0 - g.weight(i, j) };
            sum += a - degrees[i] * degrees[j] / two_m;
        }
    }
    Ok(sum / two_m)
}

/// Maps `Q` in `[-1/2, 1]` to `log(3/2 + Q) / log(5/2)` in `[0, 1]`.
pub fn normalize_modularity(q: f64) -> Result<f64> {
    if !(q >= -0.5 - MODULARITY_SLACK && q <= 1.0 + MODULARITY_SLACK) {
        return Err(Error::ModularityDomain(q));
    }
    let q = q.clamp(-0.5, 1.0);
    Ok((1.5 + q).ln() / 2.5f64.ln())
}

/// Connected components of a forest on `n` vertices.
///
/// Components are numbered in order of their smallest vertex, so vertex 0 is
/// always in component 0.
pub fn connected_components(edges: &[(usize, usize)], n: usize) -> Vec<usize> {
    let mut sets = DisjointSet::new(n);
    for &(a, b) in edges {
        sets.union(a, b);
    }
    let mut label_of_root = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|v| {
            let root = sets.find(v);
            if label_of_root[root] == usize::MAX {
                label_of_root[root] = next;
                next += 1;
            }
            label_of_root[root]
        })
        .collect()
}

/// Relabels clusters in order of their smallest vertex.
fn canonical(assignment: &[usize]) -> Vec<usize> {
    let mut map = vec![usize::MAX; assignment.len()];
    let mut next = 0;
    assignment
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect()
}

/// One partition in the sequence obtained by removing the heaviest MST edges.
#[derive(Debug, Clone, PartialEq)]
pub struct PruningStep {
    /// Number of removed edges; the partition has `removed + 1` clusters.
    pub removed: usize,
    pub assignment: Vec<usize>,
    pub modularity_q: f64,
}

impl PruningStep {
    pub fn k(&self) -> usize {
        self.removed + 1
    }

    pub fn into_partition(self) -> Result<Partition> {
        Partition::from_parts(self.assignment, self.modularity_q)
    }
}

#[derive(Debug, Clone)]
struct ClusterStats {
    members: Vec<usize>,
    intra: f64,
    degree: f64,
}

/// Iterates the partitions induced by removing MST edges in non-increasing
/// weight order (ties by endpoint order), evaluating the modularity of each.
///
/// Splitting a cluster only recomputes the statistics of its two halves, so
/// each step costs at most quadratic time in the size of the split cluster.
pub struct PrefixPartitions<'a> {
    g: &'a EuclideanGraph,
    order: Vec<(usize, usize)>,
    next: usize,
    adjacency: Vec<Vec<usize>>,
    label: Vec<usize>,
    clusters: Vec<ClusterStats>,
    degrees: Vec<f64>,
    total: f64,
    evaluations: usize,
}

impl<'a> PrefixPartitions<'a> {
    pub fn new(g: &'a EuclideanGraph, t: &SpanningTree) -> Result<Self> {
        let n = g.len();
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, found: n });
        }
        if t.edges.len() != n - 1 {
            return Err(Error::Parameter(format!(
                "spanning tree has {} edges, expected {}",
                t.edges.len(),
                n - 1
            )));
        }
        let (degrees, total) = complement_degrees(g)?;
        let mut adjacency = vec![Vec::new(); n];
        for e in &t.edges {
            adjacency[e.a].push(e.b);
            adjacency[e.b].push(e.a);
        }
        let members: Vec<usize> = (0..n).collect();
        let intra = intra_weight(g, &members);
        Ok(PrefixPartitions {
            g,
            order: t
                .edges_by_decreasing_weight()
                .into_iter()
                .map(|e| (e.a, e.b))
                .collect(),
            next: 0,
            adjacency,
            label: vec![0; n],
            clusters: vec![ClusterStats {
                members,
                intra,
                degree: degrees.iter().sum(),
            }],
            degrees,
            total,
            evaluations: 0,
        })
    }

    /// Modularity evaluations performed so far.
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// Modularity of the current (unsplit-so-far) partition.
    fn current_q(&self) -> f64 {
        self.clusters
            .iter()
            .map(|c| c.intra / self.total - (c.degree / (2.0 * self.total)).powi(2))
            .sum()
    }

    /// Modularity of the trivial single-cluster partition.
    pub fn trivial_q(&self) -> f64 {
        let d = self.degrees.iter().sum::<f64>();
        intra_weight(self.g, &(0..self.g.len()).collect::<Vec<_>>()) / self.total
            - (d / (2.0 * self.total)).powi(2)
    }

    fn split(&mut self, a: usize, b: usize) {
        self.adjacency[a].retain(|&x| x != b);
        self.adjacency[b].retain(|&x| x != a);

        let old = self.label[b];
        let new = self.clusters.len();
        let mut queue = VecDeque::from([b]);
        self.label[b] = new;
        let mut moved = vec![b];
        while let Some(v) = queue.pop_front() {
            for i in 0..self.adjacency[v].len() {
                let w = self.adjacency[v][i];
                if self.label[w] == old {
                    self.label[w] = new;
                    moved.push(w);
                    queue.push_back(w);
                }
            }
        }
        moved.sort_unstable();
        let label = &self.label;
        let stay: Vec<usize> = self.clusters[old]
            .members
            .iter()
            .copied()
            .filter(|&v| label[v] == old)
            .collect();

        let degree = |vs: &[usize]| vs.iter().map(|&v| self.degrees[v]).sum::<f64>();
        let moved_stats = ClusterStats {
            intra: intra_weight(self.g, &moved),
            degree: degree(&moved),
            members: moved,
        };
        let stay_stats = ClusterStats {
            intra: intra_weight(self.g, &stay),
            degree: degree(&stay),
            members: stay,
        };
        self.clusters[old] = stay_stats;
        self.clusters.push(moved_stats);
    }
}

fn intra_weight(g: &EuclideanGraph, members: &[usize]) -> f64 {
    let mut sum = 0.0;
    for (x, &i) in members.iter().enumerate() {
        let row = g.row(i);
        for &j in &members[x + 1..] {
            sum += 1.0 - row[j];
        }
    }
    sum
}

impl Iterator for PrefixPartitions<'_> {
    type Item = PruningStep;

    fn next(&mut self) -> Option<PruningStep> {
        let &(a, b) = self.order.get(self.next)?;
        self.next += 1;
        self.split(a, b);
        self.evaluations += 1;
        Some(PruningStep {
            removed: self.next,
            assignment: canonical(&self.label),
            modularity_q: self.current_q(),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.order.len() - self.next;
        (left, Some(left))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PruningOptions {
    /// Seed the stopping rule with the modularity of the single-cluster
    /// partition instead of the `-1` sentinel, so `k = 1` can be returned.
    pub compare_trivial: bool,
}

#[derive(Debug, Clone)]
pub struct PruningOutcome {
    pub partition: Partition,
    /// `(k, Q)` of every partition evaluated before stopping.
    pub curve: Vec<(usize, f64)>,
}

/// Greedy edge pruning with the default `-1` starting modularity.
pub fn greedy_edge_pruning(g: &EuclideanGraph, t: &SpanningTree) -> Result<Partition> {
    Ok(greedy_edge_pruning_with(g, t, PruningOptions::default())?.partition)
}

/// Removes MST edges heaviest first and stops before the first decrease in
/// modularity; if modularity never decreases the all-singletons partition is
/// returned.
pub fn greedy_edge_pruning_with(
    g: &EuclideanGraph,
    t: &SpanningTree,
    options: PruningOptions,
) -> Result<PruningOutcome> {
    let mut prefixes = PrefixPartitions::new(g, t)?;
    let trivial_q = prefixes.trivial_q();
    let mut best = PruningStep {
        removed: 0,
        assignment: vec![0; g.len()],
        modularity_q: trivial_q,
    };
    let mut best_score = if options.compare_trivial { trivial_q } else { -1.0 };
    let mut curve = Vec::new();
    for step in prefixes.by_ref() {
        curve.push((step.k(), step.modularity_q));
        if step.modularity_q < best_score {
            break;
        }
        best_score = step.modularity_q;
        best = step;
    }
    Ok(PruningOutcome {
        partition: best.into_partition()?,
        curve,
    })
}

/// `(k, Q)` for every prefix partition `k = 2..=n`.
pub fn modularity_curve(g: &EuclideanGraph, t: &SpanningTree) -> Result<Vec<(usize, f64)>> {
    Ok(PrefixPartitions::new(g, t)?
        .map(|s| (s.k(), s.modularity_q))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{minimum_spanning_tree, TreeEdge};

    /// Two triangles with complement weight 1 inside, joined by one edge of complement weight `eps`.
    fn two_cliques(eps: f64) -> EuclideanGraph {
        let mut w = vec![vec![1.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                if i == j || (i < 3) == (j < 3) {
                    w[i][j] = 0.0;
                }
            }
        }
        w[2][3] = 1.0 - eps;
        w[3][2] = 1.0 - eps;
        EuclideanGraph::from_weights(w, 6).unwrap()
    }

    #[test]
    fn trivial_partition_has_zero_modularity() {
        let g = two_cliques(0.0);
        let a = vec![0; 6];
        assert!(modularity_edge_form(&g, &a).unwrap().abs() < 1e-15);
        assert!(modularity_vertex_form(&g, &a).unwrap().abs() < 1e-15);
    }

    #[test]
    fn split_cliques_reach_one_half() {
        let g = two_cliques(0.0);
        let a = vec![0, 0, 0, 1, 1, 1];
        assert!((modularity_edge_form(&g, &a).unwrap() - 0.5).abs() < 1e-15);
        assert!((modularity_vertex_form(&g, &a).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn singletons_vertex_form() {
        let g = two_cliques(0.3);
        let a: Vec<usize> = (0..6).collect();
        let (deg, total) = complement_degrees(&g).unwrap();
        let expected = -deg.iter().map(|d| (d / (2.0 * total)).powi(2)).sum::<f64>();
        assert!((modularity_vertex_form(&g, &a).unwrap() - expected).abs() < 1e-15);
        assert!((modularity_edge_form(&g, &a).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn all_unit_distances_undefined() {
        let g = EuclideanGraph::from_weights(vec![vec![0.0, 1.0], vec![1.0, 0.0]], 2).unwrap();
        assert!(matches!(modularity_edge_form(&g, &[0, 1]), Err(Error::UndefinedModularity)));
    }

    #[test]
    fn bad_assignments_rejected() {
        let g = two_cliques(0.0);
        assert!(modularity_edge_form(&g, &[0, 0, 2, 2, 2, 2]).is_err());
        assert!(modularity_edge_form(&g, &[0, 0]).is_err());
    }

    #[test]
    fn normalization_endpoints() {
        assert_eq!(normalize_modularity(1.0).unwrap(), 1.0);
        assert_eq!(normalize_modularity(-0.5).unwrap(), 0.0);
        assert!((normalize_modularity(0.0).unwrap() - 1.5f64.ln() / 2.5f64.ln()).abs() < 1e-15);
        assert!((normalize_modularity(0.0).unwrap() - 0.44251).abs() < 1e-4);
        assert_eq!(normalize_modularity(1.0 + 1e-12).unwrap(), 1.0);
        assert!(normalize_modularity(1.01).is_err());
        assert!(normalize_modularity(-0.6).is_err());
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&[(0, 1), (1, 2)], 3), vec![0, 0, 0]);
        assert_eq!(connected_components(&[], 3), vec![0, 1, 2]);
        assert_eq!(connected_components(&[(0, 1)], 3), vec![0, 0, 1]);
        assert_eq!(connected_components(&[(2, 1)], 3), vec![0, 1, 1]);
    }

    #[test]
    fn coincident_pair_splits_once() {
        let g = EuclideanGraph::from_weights(vec![vec![0.0, 0.0], vec![0.0, 0.0]], 2).unwrap();
        let t = minimum_spanning_tree(&g, 0.02).unwrap();
        let out = greedy_edge_pruning_with(&g, &t, PruningOptions::default()).unwrap();
        // the -1 sentinel always admits the first split
        assert_eq!(out.partition.k(), 2);
        assert_eq!(out.curve.len(), 1);
        let with_trivial = greedy_edge_pruning_with(
            &g,
            &t,
            PruningOptions { compare_trivial: true },
        )
        .unwrap();
        assert_eq!(with_trivial.partition.k(), 1);
    }

    #[test]
    fn cliques_pruned_at_bridge() {
        let g = two_cliques(0.05);
        let t = minimum_spanning_tree(&g, 0.02).unwrap();
        assert!(t.edges.contains(&TreeEdge { a: 2, b: 3, weight: 0.95 }));
        let p = greedy_edge_pruning(&g, &t).unwrap();
        assert_eq!(p.k(), 2);
        assert_eq!(p.assignment(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn prefix_modularity_matches_full_evaluation() {
        let w = vec![
            vec![0.0, 0.1, 0.5, 0.9, 0.7],
            vec![0.1, 0.0, 0.4, 0.8, 0.6],
            vec![0.5, 0.4, 0.0, 0.3, 0.2],
            vec![0.9, 0.8, 0.3, 0.0, 0.35],
            vec![0.7, 0.6, 0.2, 0.35, 0.0],
        ];
        let g = EuclideanGraph::from_weights(w, 5).unwrap();
        let t = minimum_spanning_tree(&g, 0.5).unwrap();
        let mut prefixes = PrefixPartitions::new(&g, &t).unwrap();
        let mut count = 0;
        for step in prefixes.by_ref() {
            count += 1;
            assert_eq!(step.k(), count + 1);
            let full = modularity_edge_form(&g, &step.assignment).unwrap();
            assert!((full - step.modularity_q).abs() < 1e-12);
        }
        assert_eq!(count, 4);
        assert_eq!(prefixes.evaluations(), 4);
    }
}
