//! One train-and-evaluate run per seed.

use crate::data::{make_validation_holdout, make_validation_noise, normalize_unit_variance, Dataset, NoiseSigma, VALIDATION_FRACTION};
use crate::dissimilarity::{Measure, Pattern};
use crate::error::{Error, Result};
use crate::fuzzy::OccModel;
use crate::metrics::{mean_std, EvaluationReport, PatternOutcome};
use crate::training::{evolve, GaConfig, ObjectiveConfig, TrainingOutcome, TrainingProblem};

/// Default share of the target class used for training when a dataset comes
/// without explicit splits.
pub const TRAIN_FRACTION: f64 = 0.5;

/// Where the validation set comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValidationSource {
    /// Noisy copies of a sample of the test split.
    Noise(NoiseSigma),
    /// A sample moved out of the test split.
    Holdout,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub measure: Measure,
    pub objective: ObjectiveConfig,
    /// `seed` is replaced by the run seed.
    pub ga: GaConfig,
    pub normalize: bool,
    pub train_fraction: f64,
    pub validation: Option<ValidationSource>,
    pub validation_fraction: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            measure: Measure::WeightedEuclidean,
            objective: ObjectiveConfig::default(),
            ga: GaConfig::default(),
            normalize: false,
            train_fraction: TRAIN_FRACTION,
            validation: None,
            validation_fraction: VALIDATION_FRACTION,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub seed: u64,
    pub outcome: TrainingOutcome,
    pub report: EvaluationReport,
}

/// Splits, scales and builds the validation set for one seed. A dataset that
/// already has a training split keeps it.
pub fn prepare(ds: &Dataset, cfg: &ExperimentConfig, seed: u64) -> Result<Dataset> {
    let mut ds = if ds.splits.train.is_empty() {
        ds.clone().one_class_split(cfg.train_fraction, seed)?
    } else {
        ds.clone()
    };
    if cfg.normalize {
        if ds.scaling.is_some() {
            return Err(Error::Configuration("dataset is already standardized".into()));
        }
        ds = normalize_unit_variance(&ds)?;
    }
    let vseed = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    match cfg.validation {
        None => Ok(ds),
        Some(ValidationSource::Noise(sigma)) => make_validation_noise(&ds, cfg.validation_fraction, sigma, vseed),
        Some(ValidationSource::Holdout) => make_validation_holdout(&ds, cfg.validation_fraction, vseed),
    }
}

/// Trains on a prepared dataset's training split.
pub fn train_prepared(ds: &Dataset, cfg: &ExperimentConfig, seed: u64) -> Result<TrainingOutcome> {
    let train = ds.train_patterns();
    let validation = ds.splits.validation.as_ref().map(|idx| ds.labeled(idx));
    let problem = TrainingProblem::new(
        cfg.measure,
        &train,
        validation.as_ref().map(|(p, l)| (&p[..], &l[..])),
        &cfg.objective,
    )?;
    let ga = GaConfig { seed, ..cfg.ga.clone() };
    let mut outcome = evolve(&problem, &ga)?;
    outcome.model.scaling = ds.scaling.clone();
    Ok(outcome)
}

fn report(ds: &Dataset, indices: &[usize], decisions: Vec<crate::fuzzy::Decision>) -> Result<EvaluationReport> {
    let per_pattern = indices
        .iter()
        .zip(decisions)
        .map(|(&i, d)| PatternOutcome {
            id: ds.ids[i].clone(),
            label: ds.labels[i].clone(),
            is_target: ds.is_target(i),
            soft: d.soft,
            hard: d.hard,
        })
        .collect();
    EvaluationReport::new(per_pattern)
}

/// Evaluates on the test split of a dataset whose patterns already carry the
/// model's scaling.
pub fn evaluate_prepared(model: &OccModel, ds: &Dataset) -> Result<EvaluationReport> {
    let test = &ds.splits.test;
    let decisions = model.classify_prepared(&ds.select(test))?;
    report(ds, test, decisions)
}

/// Evaluates on every pattern of an unscaled dataset.
pub fn evaluate_raw(model: &OccModel, ds: &Dataset) -> Result<EvaluationReport> {
    let all: Vec<usize> = (0..ds.len()).collect();
    let decisions = model.classify_batch(&ds.patterns)?;
    report(ds, &all, decisions)
}

pub fn run_seed(ds: &Dataset, cfg: &ExperimentConfig, seed: u64) -> Result<RunResult> {
    let prepared = prepare(ds, cfg, seed)?;
    let outcome = train_prepared(&prepared, cfg, seed)?;
    let report = evaluate_prepared(&outcome.model, &prepared)?;
    Ok(RunResult { seed, outcome, report })
}

/// Mean and standard deviation of the headline numbers over runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub runs: usize,
    pub auc: (f64, f64),
    pub accuracy: (f64, f64),
    pub precision: (f64, f64),
    pub recall: (f64, f64),
    pub f_measure: (f64, f64),
    pub fitness: (f64, f64),
    pub regions: (f64, f64),
}

pub const SUMMARY_CSV_HEADER: &str = "metric,mean,std";

impl Summary {
    pub fn new(runs: &[RunResult]) -> Self {
        let stat = |f: &dyn Fn(&RunResult) -> f64| mean_std(&runs.iter().map(f).collect::<Vec<_>>());
        Summary {
            runs: runs.len(),
            auc: stat(&|r| r.report.auc),
            accuracy: stat(&|r| r.report.stats.accuracy),
            precision: stat(&|r| r.report.stats.precision),
            recall: stat(&|r| r.report.stats.recall),
            f_measure: stat(&|r| r.report.stats.f_measure),
            fitness: stat(&|r| r.outcome.evaluation.fitness),
            regions: stat(&|r| r.outcome.model.regions.len() as f64),
        }
    }

    fn rows(&self) -> [(&'static str, (f64, f64)); 7] {
        [
            ("auc", self.auc),
            ("accuracy", self.accuracy),
            ("precision", self.precision),
            ("recall", self.recall),
            ("f_measure", self.f_measure),
            ("fitness", self.fitness),
            ("regions", self.regions),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{SUMMARY_CSV_HEADER}\n");
        for (name, (m, s)) in self.rows() {
            out.push_str(&format!("{name},{m},{s}\n"));
        }
        out
    }

    /// `mean(std)` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("runs       {}\n", self.runs);
        for (name, (m, s)) in self.rows() {
            out.push_str(&format!("{name:<10} {m:.3}({s:.3})\n"));
        }
        out
    }
}

/// Convenience for callers holding raw feature vectors.
pub fn features(rows: &[Vec<f64>]) -> Vec<Pattern> {
    rows.iter().cloned().map(Pattern::Features).collect()
}
