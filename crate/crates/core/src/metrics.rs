//! Test-set evaluation: ROC AUC over soft scores and confusion statistics over
//! hard decisions. Targets are the positive class.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Area under the ROC curve via the Mann–Whitney rank statistic.
///
/// Equals the probability that a random target outscores a random
/// non-target; tied pairs count one half.
pub fn auc(scores: &[(f64, bool)]) -> Result<f64> {
    let n_pos = scores.iter().filter(|s| s.1).count();
    let n_neg = scores.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedAuc);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].0.total_cmp(&scores[b].0));

    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]].0 == scores[order[i]].0 {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their average
        let avg = (i + j + 2) as f64 / 2.0;
        rank_sum += avg * order[i..=j].iter().filter(|&&k| scores[k].1).count() as f64;
        i = j + 1;
    }
    let (p, n) = (n_pos as f64, n_neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfusionStats {
    pub confusion: Confusion,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// No pattern was accepted, so precision was reported as 0.
    pub precision_undefined: bool,
    /// No target pattern was present, so recall was reported as 0.
    pub recall_undefined: bool,
}

/// Confusion statistics of `(accepted, is_target)` pairs.
pub fn confusion(decisions: &[(bool, bool)]) -> Result<ConfusionStats> {
    if decisions.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut c = Confusion::default();
    for &(accepted, target) in decisions {
        match (accepted, target) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    let ratio = |a: usize, b: usize| if b > 0 { (a as f64 / b as f64, false) } else { (0.0, true) };
    let (precision, precision_undefined) = ratio(c.tp, c.tp + c.fp);
    let (recall, recall_undefined) = ratio(c.tp, c.tp + c.fn_);
    let f_measure = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(ConfusionStats {
        confusion: c,
        accuracy: (c.tp + c.tn) as f64 / decisions.len() as f64,
        precision,
        recall,
        f_measure,
        precision_undefined,
        recall_undefined,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternOutcome {
    pub id: String,
    pub label: String,
    pub is_target: bool,
    pub soft: f64,
    pub hard: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub auc: f64,
    pub stats: ConfusionStats,
    pub per_pattern: Vec<PatternOutcome>,
}

pub const REPORT_CSV_HEADER: &str =
    "auc,accuracy,precision,recall,f_measure,tp,fp,tn,fn,precision_undefined";
pub const PATTERN_CSV_HEADER: &str = "id,label,is_target,soft,hard";

impl EvaluationReport {
    pub fn new(per_pattern: Vec<PatternOutcome>) -> Result<Self> {
        let scores: Vec<(f64, bool)> = per_pattern.iter().map(|o| (o.soft, o.is_target)).collect();
        let decisions: Vec<(bool, bool)> = per_pattern.iter().map(|o| (o.hard, o.is_target)).collect();
        Ok(EvaluationReport {
            auc: auc(&scores)?,
            stats: confusion(&decisions)?,
            per_pattern,
        })
    }

    /// Number of misclassified patterns under the hard decision.
    pub fn hard_errors(&self) -> usize {
        self.stats.confusion.fp + self.stats.confusion.fn_
    }

    pub fn to_text(&self) -> String {
        let s = &self.stats;
        let c = s.confusion;
        let mut out = String::new();
        writeln!(out, "patterns   {}", self.per_pattern.len()).unwrap();
        writeln!(out, "AUC        {:.4}", self.auc).unwrap();
        writeln!(out, "accuracy   {:.4}", s.accuracy).unwrap();
        let flag = if s.precision_undefined { "  (undefined: nothing accepted)" } else { "" };
        writeln!(out, "precision  {:.4}{flag}", s.precision).unwrap();
        writeln!(out, "recall     {:.4}", s.recall).unwrap();
        writeln!(out, "F-measure  {:.4}", s.f_measure).unwrap();
        writeln!(out, "confusion  tp={} fp={} tn={} fn={}", c.tp, c.fp, c.tn, c.fn_).unwrap();
        out
    }

    /// One CSV row matching [`REPORT_CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let s = &self.stats;
        let c = s.confusion;
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.auc, s.accuracy, s.precision, s.recall, s.f_measure, c.tp, c.fp, c.tn, c.fn_, s.precision_undefined
        )
    }

    /// Per-pattern dump with [`PATTERN_CSV_HEADER`].
    pub fn patterns_csv(&self) -> String {
        let mut out = format!("{PATTERN_CSV_HEADER}\n");
        for o in &self.per_pattern {
            writeln!(out, "{},{},{},{},{}", o.id, o.label, o.is_target, o.soft, o.hard).unwrap();
        }
        out
    }
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
