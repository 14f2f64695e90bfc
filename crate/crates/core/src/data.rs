//! Datasets: loading, one-class splits, feature standardization, validation
//! set construction and synthetic cluster generation.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dissimilarity::{Edge, LabeledGraph, Pattern, Vertex};
use crate::error::{Error, Result};

/// Default share of the test split sampled into a validation set.
pub const VALIDATION_FRACTION: f64 = 0.10;

/// Index sets of a dataset. Training holds target patterns only.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Splits {
    pub train: Vec<usize>,
    pub validation: Option<Vec<usize>>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub patterns: Vec<Pattern>,
    pub labels: Vec<String>,
    pub ids: Vec<String>,
    pub target_class: String,
    pub splits: Splits,
    /// Standardization already applied to `patterns`, if any.
    pub scaling: Option<Standardizer>,
    /// Feature column names, for feature datasets.
    pub feature_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset whose test split holds every pattern and whose
    /// training split is empty.
    pub fn new(patterns: Vec<Pattern>, labels: Vec<String>, target_class: impl Into<String>) -> Result<Self> {
        if patterns.len() != labels.len() {
            return Err(Error::Dimension {
                expected: patterns.len(),
                found: labels.len(),
            });
        }
        let n = patterns.len();
        Ok(Dataset {
            patterns,
            labels,
            ids: (0..n).map(|i| i.to_string()).collect(),
            target_class: target_class.into(),
            splits: Splits {
                train: vec![],
                validation: None,
                test: (0..n).collect(),
            },
            scaling: None,
            feature_names: vec![],
        })
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn is_target(&self, i: usize) -> bool {
        self.labels[i] == self.target_class
    }

    pub fn target_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.is_target(i)).count()
    }

    pub fn select(&self, indices: &[usize]) -> Vec<Pattern> {
        indices.iter().map(|&i| self.patterns[i].clone()).collect()
    }

    /// Patterns and target flags of an index set.
    pub fn labeled(&self, indices: &[usize]) -> (Vec<Pattern>, Vec<bool>) {
        (self.select(indices), indices.iter().map(|&i| self.is_target(i)).collect())
    }

    pub fn train_patterns(&self) -> Vec<Pattern> {
        self.select(&self.splits.train)
    }

    /// Installs explicit splits after checking them.
    pub fn with_splits(mut self, splits: Splits) -> Result<Self> {
        self.splits = splits;
        self.check_splits()?;
        Ok(self)
    }

    /// Trains on a random `train_fraction` of the target patterns and tests on
    /// the remaining targets plus every non-target.
    pub fn one_class_split(mut self, train_fraction: f64, seed: u64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction <= 1.0) {
            return Err(Error::Configuration(format!(
                "training fraction {train_fraction} must lie in (0, 1]"
            )));
        }
        let mut targets: Vec<usize> = (0..self.len()).filter(|&i| self.is_target(i)).collect();
        if targets.is_empty() {
            return Err(Error::Configuration(format!(
                "no pattern carries the target class `{}`",
                self.target_class
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        targets.shuffle(&mut rng);
        let n_train = ((train_fraction * targets.len() as f64).round() as usize).clamp(1, targets.len());
        let mut train = targets[..n_train].to_vec();
        train.sort_unstable();
        let mut test: Vec<usize> = (0..self.len()).filter(|i| train.binary_search(i).is_err()).collect();
        test.sort_unstable();
        self.splits = Splits {
            train,
            validation: None,
            test,
        };
        Ok(self)
    }

    fn check_splits(&self) -> Result<()> {
        let n = self.len();
        let mut owner = vec![false; n];
        let all = self
            .splits
            .train
            .iter()
            .chain(self.splits.validation.iter().flatten())
            .chain(&self.splits.test);
        for &i in all {
            if i >= n {
                return Err(Error::Configuration(format!("split index {i} out of range")));
            }
            if owner[i] {
                return Err(Error::Configuration(format!("pattern {i} appears in two splits")));
            }
            owner[i] = true;
        }
        if let Some(&i) = self.splits.train.iter().find(|&&i| !self.is_target(i)) {
            return Err(Error::Configuration(format!(
                "training pattern {i} is not of the target class"
            )));
        }
        Ok(())
    }
}

/// Per-feature z-scoring with frozen statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    /// Population standard deviation; zero marks a constant feature.
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[&[f64]]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::EmptyDataset);
        };
        let u = first.len();
        let n = rows.len() as f64;
        let mut mean = vec![0.0; u];
        for r in rows {
            if r.len() != u {
                return Err(Error::Dimension {
                    expected: u,
                    found: r.len(),
                });
            }
            for (m, x) in mean.iter_mut().zip(*r) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; u];
        for r in rows {
            for ((v, x), m) in var.iter_mut().zip(*r).zip(&mean) {
                *v += (x - m) * (x - m);
            }
        }
        let std = var.into_iter().map(|v| (v / n).sqrt()).collect();
        Ok(Standardizer { mean, std })
    }

    pub fn apply_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.mean.len() {
            return Err(Error::Dimension {
                expected: self.mean.len(),
                found: x.len(),
            });
        }
        Ok(x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| if *s > 0.0 { (v - m) / s } else { 0.0 })
            .collect())
    }

    pub fn apply(&self, p: &Pattern) -> Result<Pattern> {
        match p {
            Pattern::Features(x) => Ok(Pattern::Features(self.apply_values(x)?)),
            Pattern::Graph(_) => Err(Error::Domain("feature scaling applied to a graph pattern".into())),
        }
    }
}

fn feature_rows<'a>(ds: &'a Dataset, indices: &[usize]) -> Result<Vec<&'a [f64]>> {
    indices
        .iter()
        .map(|&i| {
            ds.patterns[i]
                .as_features()
                .ok_or_else(|| Error::Domain("operation requires feature patterns".into()))
        })
        .collect()
}

/// Joins a training file and a test file into one dataset: every pattern of
/// `train` forms the training split, every pattern of `test` the test split.
pub fn train_test(train: Dataset, test: Dataset) -> Result<Dataset> {
    if train.target_class != test.target_class {
        return Err(Error::Configuration("training and test sets name different target classes".into()));
    }
    if let Some(i) = (0..train.len()).find(|&i| !train.is_target(i)) {
        return Err(Error::Configuration(format!(
            "training pattern {} has class `{}`, expected only `{}`",
            train.ids[i], train.labels[i], train.target_class
        )));
    }
    if !train.feature_names.is_empty() && !test.feature_names.is_empty() && train.feature_names != test.feature_names {
        return Err(Error::Configuration("training and test sets have different feature columns".into()));
    }
    let n = train.len();
    let mut ds = train;
    ds.splits = Splits {
        train: (0..n).collect(),
        validation: None,
        test: (n..n + test.len()).collect(),
    };
    ds.patterns.extend(test.patterns);
    ds.labels.extend(test.labels);
    ds.ids.extend(test.ids.into_iter().map(|id| format!("test:{id}")));
    ds.ids[..n].iter_mut().for_each(|id| *id = format!("train:{id}"));
    ds.check_splits()?;
    Ok(ds)
}

/// Z-scores every pattern with statistics from the training split
/// (the whole dataset if no training split is set yet).
pub fn normalize_unit_variance(ds: &Dataset) -> Result<Dataset> {
    let basis: Vec<usize> = if ds.splits.train.is_empty() {
        (0..ds.len()).collect()
    } else {
        ds.splits.train.clone()
    };
    let scaler = Standardizer::fit(&feature_rows(ds, &basis)?)?;
    let patterns = ds.patterns.iter().map(|p| scaler.apply(p)).collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        patterns,
        scaling: Some(scaler),
        ..ds.clone()
    })
}

/// Picks `round(fraction * count)` (at least one) test patterns per class.
fn stratified_sample(ds: &Dataset, fraction: f64, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Configuration(format!(
            "validation fraction {fraction} must lie in (0, 1)"
        )));
    }
    let (mut targets, mut others): (Vec<usize>, Vec<usize>) =
        ds.splits.test.iter().partition(|&&i| ds.is_target(i));
    let mut picked = Vec::new();
    for (name, pool) in [("target", &mut targets), ("non-target", &mut others)] {
        if pool.is_empty() {
            return Err(Error::Configuration(format!(
                "test split has no {name} patterns to build a validation set from"
            )));
        }
        let take = ((fraction * pool.len() as f64).round() as usize).clamp(1, pool.len());
        pool.shuffle(rng);
        picked.extend_from_slice(&pool[..take]);
    }
    picked.sort_unstable();
    Ok(picked)
}

/// Noise level for [`make_validation_noise`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSigma {
    Absolute(f64),
    /// Multiple of each feature's training-split standard deviation.
    RelativeToTrainStd(f64),
}

impl Default for NoiseSigma {
    fn default() -> Self {
        NoiseSigma::RelativeToTrainStd(0.05)
    }
}

/// Copies a stratified sample of the test split, perturbs every feature with
/// zero-mean Gaussian noise and installs the copies as the validation split.
pub fn make_validation_noise(ds: &Dataset, fraction: f64, sigma: NoiseSigma, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = stratified_sample(ds, fraction, &mut rng)?;
    let rows = feature_rows(ds, &picked)?;
    let u = rows[0].len();
    let sigmas = match sigma {
        NoiseSigma::Absolute(s) => vec![s; u],
        NoiseSigma::RelativeToTrainStd(f) => {
            if ds.splits.train.is_empty() {
                return Err(Error::Configuration(
                    "relative validation noise needs a training split".into(),
                ));
            }
            Standardizer::fit(&feature_rows(ds, &ds.splits.train)?)?
                .std
                .into_iter()
                .map(|s| f * s)
                .collect()
        }
    };
    if sigmas.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
        return Err(Error::Configuration("noise sigma must be finite and nonnegative".into()));
    }
    let mut out = ds.clone();
    let mut validation = Vec::with_capacity(picked.len());
    for (&i, row) in picked.iter().zip(rows) {
        let noisy = row
            .iter()
            .zip(&sigmas)
            .map(|(x, s)| x + s * rng.sample::<f64, _>(StandardNormal))
            .collect();
        validation.push(out.patterns.len());
        out.patterns.push(Pattern::Features(noisy));
        out.labels.push(ds.labels[i].clone());
        out.ids.push(format!("{}~noise", ds.ids[i]));
    }
    out.splits.validation = Some(validation);
    out.check_splits()?;
    Ok(out)
}

/// Moves a stratified sample of the test split into the validation split.
pub fn make_validation_holdout(ds: &Dataset, fraction: f64, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = stratified_sample(ds, fraction, &mut rng)?;
    let mut out = ds.clone();
    out.splits.test.retain(|i| picked.binary_search(i).is_err());
    out.splits.validation = Some(picked);
    out.check_splits()?;
    Ok(out)
}

/// Which split a synthetic cluster's samples are assigned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitRole {
    Train,
    Test,
}

/// A Gaussian cluster to sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSpec {
    pub center: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub count: usize,
    pub label: String,
    pub role: SplitRole,
}

impl ClusterSpec {
    /// Isotropic cluster with standard deviation `sd` on every axis.
    pub fn spherical(center: &[f64], sd: f64, count: usize, label: &str, role: SplitRole) -> Self {
        let u = center.len();
        let covariance = (0..u)
            .map(|i| (0..u).map(|j| if i == j { sd * sd } else { 0.0 }).collect())
            .collect();
        ClusterSpec {
            center: center.to_vec(),
            covariance,
            count,
            label: label.to_string(),
            role,
        }
    }

    /// Axis-aligned cluster with one standard deviation per axis.
    pub fn axis_aligned(center: &[f64], sds: &[f64], count: usize, label: &str, role: SplitRole) -> Self {
        let mut spec = Self::spherical(center, 0.0, count, label, role);
        for (i, s) in sds.iter().enumerate() {
            spec.covariance[i][i] = s * s;
        }
        spec
    }
}

/// Lower Cholesky factor of a positive semi-definite matrix.
fn cholesky(cov: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let u = cov.len();
    let mut l = vec![vec![0.0; u]; u];
    for i in 0..u {
        if cov[i].len() != u {
            return Err(Error::Parameter("covariance must be square".into()));
        }
        for j in 0..=i {
            if (cov[i][j] - cov[j][i]).abs() > 1e-12 {
                return Err(Error::Parameter("covariance must be symmetric".into()));
            }
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = cov[i][i] - s;
                if d < -1e-12 {
                    return Err(Error::Parameter("covariance is not positive semi-definite".into()));
                }
                l[i][j] = d.max(0.0).sqrt();
            } else if l[j][j] > 0.0 {
                l[i][j] = (cov[i][j] - s) / l[j][j];
            } else if (cov[i][j] - s).abs() > 1e-12 {
                return Err(Error::Parameter("covariance is not positive semi-definite".into()));
            }
        }
    }
    Ok(l)
}

/// Samples Gaussian clusters; splits follow each cluster's role.
pub fn synth_clusters(specs: &[ClusterSpec], target_class: &str, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut patterns = Vec::new();
    let mut labels = Vec::new();
    let mut train = Vec::new();
    let mut test = Vec::new();
    for spec in specs {
        let u = spec.center.len();
        if spec.covariance.len() != u {
            return Err(Error::Dimension {
                expected: u,
                found: spec.covariance.len(),
            });
        }
        let l = cholesky(&spec.covariance)?;
        for _ in 0..spec.count {
            let z: Vec<f64> = (0..u).map(|_| rng.sample(StandardNormal)).collect();
            let x = (0..u)
                .map(|i| spec.center[i] + (0..=i).map(|k| l[i][k] * z[k]).sum::<f64>())
                .collect();
            match spec.role {
                SplitRole::Train => train.push(patterns.len()),
                SplitRole::Test => test.push(patterns.len()),
            }
            patterns.push(Pattern::Features(x));
            labels.push(spec.label.clone());
        }
    }
    let u = specs.first().map_or(0, |s| s.center.len());
    let mut ds = Dataset::new(patterns, labels, target_class)?;
    ds.feature_names = (0..u).map(|i| format!("x{i}")).collect();
    ds.with_splits(Splits {
        train,
        validation: None,
        test,
    })
}

/// Reads a feature CSV with a header row; `label_column` names the class
/// column, every other column must be numeric.
pub fn load_feature_csv(path: &Path, label_column: &str, target_class: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let label_idx = headers.iter().position(|h| h == label_column).ok_or_else(|| {
        Error::parse(path, 1, format!("header has no label column `{label_column}`"))
    })?;
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();

    let mut patterns = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != headers.len() {
            return Err(Error::parse(
                path,
                line,
                format!("expected {} fields, found {}", headers.len(), record.len()),
            ));
        }
        let mut values = Vec::with_capacity(feature_names.len());
        for (i, field) in record.iter().enumerate() {
            if i == label_idx {
                continue;
            }
            let v: f64 = field.parse().map_err(|_| Error::NonNumeric {
                path: path.to_path_buf(),
                line,
                column: headers[i].to_string(),
                value: field.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonNumeric {
                    path: path.to_path_buf(),
                    line,
                    column: headers[i].to_string(),
                    value: field.to_string(),
                });
            }
            values.push(v);
        }
        patterns.push(Pattern::Features(values));
        labels.push(record[label_idx].to_string());
    }
    if patterns.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut ds = Dataset::new(patterns, labels, target_class)?;
    ds.feature_names = feature_names;
    Ok(ds)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        kind => Error::parse(path, line, format!("{kind:?}")),
    }
}

/// Writes feature patterns as CSV with a trailing `label` column.
pub fn write_feature_csv(path: &Path, names: &[String], patterns: &[Pattern], labels: &[String]) -> Result<()> {
    let mut out = String::new();
    for n in names {
        out.push_str(n);
        out.push(',');
    }
    out.push_str("label\n");
    for (p, l) in patterns.iter().zip(labels) {
        let x = p
            .as_features()
            .ok_or_else(|| Error::Domain("CSV output requires feature patterns".into()))?;
        for v in x {
            write!(out, "{v},").expect("writing to a String cannot fail");
        }
        out.push_str(l);
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn parse_reals<'a>(path: &Path, line: usize, fields: impl Iterator<Item = &'a str>) -> Result<Vec<f64>> {
    fields
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(path, line, format!("invalid label value `{f}`")))
        })
        .collect()
}

fn parse_id(path: &Path, line: usize, field: Option<&str>) -> Result<u64> {
    let f = field.ok_or_else(|| Error::parse(path, line, "missing vertex id"))?;
    f.parse()
        .map_err(|_| Error::parse(path, line, format!("invalid vertex id `{f}`")))
}

struct GraphRecord {
    id: String,
    class: String,
    line: usize,
    vertices: Vec<Vertex>,
    edges: Vec<(usize, Edge)>,
}

impl GraphRecord {
    fn finish(self, path: &Path) -> Result<(String, String, LabeledGraph)> {
        for (line, e) in &self.edges {
            for end in [e.src, e.dst] {
                if !self.vertices.iter().any(|v| v.id == end) {
                    return Err(Error::parse(
                        path,
                        *line,
                        format!("edge endpoint {end} is not a vertex of graph `{}`", self.id),
                    ));
                }
            }
        }
        let line = self.line;
        let g = LabeledGraph::new(self.vertices, self.edges.into_iter().map(|(_, e)| e).collect())
            .map_err(|e| Error::parse(path, line, e.to_string()))?;
        Ok((self.id, self.class, g))
    }
}

/// Parses the line-oriented graph format:
///
/// ```text
/// graph <id> <class>
/// v <id> <l1> <l2> ...
/// e <src> <dst> <l1> ...
/// ```
///
/// Records are separated by blank lines; `#` starts a comment line.
pub fn parse_graph_file(path: &Path, text: &str) -> Result<Vec<(String, String, LabeledGraph)>> {
    let mut out = Vec::new();
    let mut current: Option<GraphRecord> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            if let Some(rec) = current.take() {
                out.push(rec.finish(path)?);
            }
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        match fields.next() {
            Some("graph") => {
                if let Some(rec) = current.take() {
                    out.push(rec.finish(path)?);
                }
                let id = fields.next().ok_or_else(|| Error::parse(path, line, "missing graph id"))?;
                let class = fields
                    .next()
                    .ok_or_else(|| Error::parse(path, line, "missing graph class"))?;
                if fields.next().is_some() {
                    return Err(Error::parse(path, line, "trailing fields after graph class"));
                }
                current = Some(GraphRecord {
                    id: id.to_string(),
                    class: class.to_string(),
                    line,
                    vertices: vec![],
                    edges: vec![],
                });
            }
            Some(kind @ ("v" | "e")) => {
                let rec = current
                    .as_mut()
                    .ok_or_else(|| Error::parse(path, line, "vertex or edge outside a graph record"))?;
                if kind == "v" {
                    let id = parse_id(path, line, fields.next())?;
                    let label = parse_reals(path, line, fields)?;
                    rec.vertices.push(Vertex { id, label });
                } else {
                    let src = parse_id(path, line, fields.next())?;
                    let dst = parse_id(path, line, fields.next())?;
                    let label = parse_reals(path, line, fields)?;
                    rec.edges.push((line, Edge { src, dst, label }));
                }
            }
            Some(other) => {
                return Err(Error::parse(path, line, format!("unknown record type `{other}`")));
            }
            None => unreachable!("blank lines handled above"),
        }
    }
    if let Some(rec) = current.take() {
        out.push(rec.finish(path)?);
    }
    Ok(out)
}

/// Loads a graph file; every graph becomes one labeled pattern.
pub fn load_graph_file(path: &Path, target_class: &str) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let graphs = parse_graph_file(path, &text)?;
    if graphs.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut ids = Vec::with_capacity(graphs.len());
    let mut labels = Vec::with_capacity(graphs.len());
    let mut patterns = Vec::with_capacity(graphs.len());
    for (id, class, g) in graphs {
        ids.push(id);
        labels.push(class);
        patterns.push(Pattern::Graph(g));
    }
    let mut ds = Dataset::new(patterns, labels, target_class)?;
    ds.ids = ids;
    Ok(ds)
}

/// Renders graphs in the format read by [`parse_graph_file`].
pub fn render_graphs<'a>(graphs: impl IntoIterator<Item = (&'a str, &'a str, &'a LabeledGraph)>) -> String {
    let mut out = String::new();
    for (id, class, g) in graphs {
        writeln!(out, "graph {id} {class}").unwrap();
        for v in g.vertices() {
            write!(out, "v {}", v.id).unwrap();
            for x in &v.label {
                write!(out, " {x}").unwrap();
            }
            out.push('\n');
        }
        for e in g.edges() {
            write!(out, "e {} {}", e.src, e.dst).unwrap();
            for x in &e.label {
                write!(out, " {x}").unwrap();
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}
