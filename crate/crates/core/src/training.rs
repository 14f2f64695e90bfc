//! Genetic-algorithm synthesis of the one-class model.
//!
//! A candidate is a parameter vector of the dissimilarity measure. Its fitness
//! combines the MST entropy estimate of the embedded training set with the
//! normalized modularity of an MST-derived partition (`Eocc1`), optionally
//! mixed with validation accuracy over every MST prefix partition (`Eocc2`).

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dissimilarity::{dissimilarities, embed_with_normalizer, DissimilarityMatrix, Measure, Params, Pattern};
use crate::error::{Error, Result};
use crate::fuzzy::{fuzzify_with, hard_decision, FuzzyRegion, OccModel, TConorm, TauRule};
use crate::graph::{build_graph, minimum_spanning_tree, renyi_entropy, EntropyEstimate, EuclideanGraph, SpanningTree, DEFAULT_GAMMA};
use crate::partition::{greedy_edge_pruning_with, PrefixPartitions, PruningOptions};

/// Two fitness values closer than this count as unchanged for the stall check.
pub const STALL_TOLERANCE: f64 = 1e-12;
/// Grid used to key the fitness cache.
const CACHE_QUANTUM: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub mutation_rate: f64,
    /// Number of evaluated populations, the random initial one included.
    pub max_generations: usize,
    pub stall_window: usize,
    pub elitism: bool,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 30,
            mutation_rate: 0.3,
            max_generations: 100,
            stall_window: 10,
            elitism: true,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Configuration("population size must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::Configuration(format!(
                "mutation rate {} outside [0, 1]",
                self.mutation_rate
            )));
        }
        if self.max_generations == 0 {
            return Err(Error::Configuration("at least one generation is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Entropy plus modularity on the training set.
    #[default]
    Eocc1,
    /// Adds validation accuracy and picks the best MST prefix partition.
    Eocc2,
}

/// Reference used to bound the training dissimilarities to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleReference {
    /// Divide by the largest training dissimilarity under all-ones parameters.
    /// The divisor does not depend on the candidate, so the magnitude of the
    /// weights stays visible to the objective.
    #[default]
    UnitParams,
    /// Divide by the largest training dissimilarity of the candidate itself.
    CandidateMax,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveConfig {
    pub eta: f64,
    pub beta: f64,
    pub gamma: f64,
    pub scheme: Scheme,
    /// Divide the entropy estimate by `d / gamma`, bringing it near the
    /// modularity's range.
    pub entropy_rescale: bool,
    pub tconorm: TConorm,
    pub tau_rule: TauRule,
    pub pruning: PruningOptions,
    pub scale_reference: ScaleReference,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        ObjectiveConfig {
            eta: 0.5,
            beta: 0.5,
            gamma: DEFAULT_GAMMA,
            scheme: Scheme::Eocc1,
            entropy_rescale: false,
            tconorm: TConorm::Max,
            tau_rule: TauRule::MstEdges,
            pruning: PruningOptions::default(),
            scale_reference: ScaleReference::UnitParams,
        }
    }
}

impl ObjectiveConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eta", self.eta), ("beta", self.beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Configuration(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if !(self.gamma > 0.0) {
            return Err(Error::Configuration(format!("gamma {} must be positive", self.gamma)));
        }
        Ok(())
    }
}

/// Objective terms of one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// `-inf` for degenerate candidates.
    pub fitness: f64,
    pub entropy: f64,
    pub modularity_m: f64,
    pub regions: usize,
    /// Validation accuracy of the selected partition (`Eocc2` only).
    pub accuracy: Option<f64>,
    pub modularity_evaluations: usize,
}

impl Evaluation {
    fn degenerate() -> Self {
        Evaluation {
            fitness: f64::NEG_INFINITY,
            entropy: f64::NAN,
            modularity_m: f64::NAN,
            regions: 0,
            accuracy: None,
            modularity_evaluations: 0,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.fitness == f64::NEG_INFINITY
    }
}

struct Structure {
    embedding: DissimilarityMatrix,
    normalizer: f64,
    graph: EuclideanGraph,
    tree: SpanningTree,
    entropy: EntropyEstimate,
}

/// Everything an individual's fitness depends on besides its genes.
pub struct TrainingProblem<'a> {
    measure: Measure,
    train: &'a [Pattern],
    validation: Option<(&'a [Pattern], &'a [bool])>,
    cfg: &'a ObjectiveConfig,
    unit_normalizer: f64,
    param_count: usize,
}

impl<'a> TrainingProblem<'a> {
    pub fn new(
        measure: Measure,
        train: &'a [Pattern],
        validation: Option<(&'a [Pattern], &'a [bool])>,
        cfg: &'a ObjectiveConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        if train.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                found: train.len(),
            });
        }
        if cfg.gamma >= train.len() as f64 {
            return Err(Error::Configuration(format!(
                "gamma {} must be below the embedding dimension {}",
                cfg.gamma,
                train.len()
            )));
        }
        if let Some((patterns, labels)) = validation {
            if patterns.len() != labels.len() {
                return Err(Error::Dimension {
                    expected: patterns.len(),
                    found: labels.len(),
                });
            }
        }
        if cfg.scheme == Scheme::Eocc2 {
            let Some((_, labels)) = validation else {
                return Err(Error::Configuration("EOCC-2 requires a validation set".into()));
            };
            if !labels.iter().any(|&t| t) || labels.iter().all(|&t| t) {
                return Err(Error::Configuration(
                    "validation set must contain target and non-target patterns".into(),
                ));
            }
        }
        let param_count = measure.param_count(train)?;
        let unit_normalizer = match cfg.scale_reference {
            ScaleReference::UnitParams => {
                let max = dissimilarities(train, train, &Params::ones(param_count), measure)?.max_entry();
                if max > 0.0 {
                    max
                } else {
                    1.0
                }
            }
            ScaleReference::CandidateMax => f64::NAN,
        };
        Ok(TrainingProblem {
            measure,
            train,
            validation,
            cfg,
            unit_normalizer,
            param_count,
        })
    }

    pub fn param_count(&self) -> usize {
        self.param_count
    }

    pub fn config(&self) -> &ObjectiveConfig {
        self.cfg
    }

    fn normalizer_for(&self, p: &Params) -> Result<f64> {
        match self.cfg.scale_reference {
            ScaleReference::UnitParams => Ok(self.unit_normalizer),
            ScaleReference::CandidateMax => {
                let max = dissimilarities(self.train, self.train, p, self.measure)?.max_entry();
                Ok(if max > 0.0 { max } else { 1.0 })
            }
        }
    }

    fn structure(&self, p: &Params) -> Result<Structure> {
        let normalizer = self.normalizer_for(p)?;
        let embedding = embed_with_normalizer(self.train, self.train, p, self.measure, normalizer)?;
        let graph = build_graph(&embedding)?;
        let tree = minimum_spanning_tree(&graph, self.cfg.gamma)?;
        let entropy = renyi_entropy(&tree, graph.len(), graph.dim(), self.cfg.gamma)?;
        Ok(Structure {
            embedding,
            normalizer,
            graph,
            tree,
            entropy,
        })
    }

    fn entropy_term(&self, e: &EntropyEstimate, d: usize) -> f64 {
        if self.cfg.entropy_rescale {
            e.value * self.cfg.gamma / d as f64
        } else {
            e.value
        }
    }

    fn bracket(&self, entropy: f64, modularity_m: f64) -> f64 {
        self.cfg.eta * entropy + (1.0 - self.cfg.eta) * modularity_m
    }

    fn check_params(&self, p: &Params) -> Result<()> {
        if p.len() != self.param_count {
            return Err(Error::Dimension {
                expected: self.param_count,
                found: p.len(),
            });
        }
        Ok(())
    }

    /// `eta * H + (1 - eta) * M` with the partition from greedy edge pruning.
    pub fn fitness_eocc1(&self, p: &Params) -> Result<Evaluation> {
        Ok(self.eocc1(p, false)?.map_or_else(Evaluation::degenerate, |(e, _, _)| e))
    }

    fn eocc1(&self, p: &Params, with_regions: bool) -> Result<Option<(Evaluation, Vec<FuzzyRegion>, f64)>> {
        self.check_params(p)?;
        let s = match degenerate_as_none(self.structure(p))? {
            Some(s) => s,
            None => return Ok(None),
        };
        let outcome = match degenerate_as_none(greedy_edge_pruning_with(&s.graph, &s.tree, self.cfg.pruning))? {
            Some(o) => o,
            None => return Ok(None),
        };
        let entropy = self.entropy_term(&s.entropy, s.graph.dim());
        let m = outcome.partition.modularity_m();
        let eval = Evaluation {
            fitness: self.bracket(entropy, m),
            entropy,
            modularity_m: m,
            regions: outcome.partition.k(),
            accuracy: None,
            modularity_evaluations: outcome.curve.len(),
        };
        let regions = if with_regions {
            fuzzify_with(&s.embedding, &s.tree, &outcome.partition, self.cfg.tau_rule)
        } else {
            Vec::new()
        };
        Ok(Some((eval, regions, s.normalizer)))
    }

    /// `beta * accuracy + (1 - beta) * (eta * H + (1 - eta) * M_i)`, maximized
    /// over every MST prefix partition `i = 1..n-1`.
    pub fn fitness_eocc2(&self, p: &Params) -> Result<Evaluation> {
        Ok(self.eocc2(p)?.map_or_else(Evaluation::degenerate, |(e, _, _)| e))
    }

    fn eocc2(&self, p: &Params) -> Result<Option<(Evaluation, Vec<FuzzyRegion>, f64)>> {
        self.check_params(p)?;
        let Some((val_patterns, val_labels)) = self.validation else {
            return Err(Error::Configuration("EOCC-2 requires a validation set".into()));
        };
        let s = match degenerate_as_none(self.structure(p))? {
            Some(s) => s,
            None => return Ok(None),
        };
        let val = embed_with_normalizer(val_patterns, self.train, p, self.measure, s.normalizer)?;
        let entropy = self.entropy_term(&s.entropy, s.graph.dim());
        let mut prefixes = match degenerate_as_none(PrefixPartitions::new(&s.graph, &s.tree))? {
            Some(x) => x,
            None => return Ok(None),
        };

        let mut best: Option<(Evaluation, Vec<FuzzyRegion>)> = None;
        for step in prefixes.by_ref() {
            let partition = step.into_partition()?;
            let regions = fuzzify_with(&s.embedding, &s.tree, &partition, self.cfg.tau_rule);
            let correct = val
                .iter_rows()
                .zip(val_labels)
                .filter(|(v, &t)| hard_decision(&regions, v) == t)
                .count();
            let accuracy = correct as f64 / val_labels.len() as f64;
            let m = partition.modularity_m();
            let score = self.cfg.beta * accuracy + (1.0 - self.cfg.beta) * self.bracket(entropy, m);
            if best.as_ref().is_none_or(|(b, _)| score > b.fitness) {
                best = Some((
                    Evaluation {
                        fitness: score,
                        entropy,
                        modularity_m: m,
                        regions: partition.k(),
                        accuracy: Some(accuracy),
                        modularity_evaluations: 0,
                    },
                    regions,
                ));
            }
        }
        let evaluations = prefixes.evaluations();
        Ok(best.map(|(mut e, regions)| {
            e.modularity_evaluations = evaluations;
            (e, regions, s.normalizer)
        }))
    }

    pub fn evaluate(&self, p: &Params) -> Result<Evaluation> {
        match self.cfg.scheme {
            Scheme::Eocc1 => self.fitness_eocc1(p),
            Scheme::Eocc2 => self.fitness_eocc2(p),
        }
    }

    /// The classifier obtained for parameters `p` under the configured scheme.
    pub fn build_model(&self, p: &Params) -> Result<(OccModel, Evaluation)> {
        let built = match self.cfg.scheme {
            Scheme::Eocc1 => self.eocc1(p, true)?,
            Scheme::Eocc2 => self.eocc2(p)?,
        };
        let (eval, regions, normalizer) = built.ok_or_else(|| {
            Error::DegenerateData("parameters collapse the training set to a single point".into())
        })?;
        let model = OccModel {
            measure: self.measure,
            params: p.clone(),
            reps: self.train.to_vec(),
            normalizer,
            regions,
            tconorm: self.cfg.tconorm,
            scaling: None,
        };
        model.validate()?;
        Ok((model, eval))
    }
}

/// Degenerate geometry makes a candidate unusable rather than failing the run.
fn degenerate_as_none<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegenerateData(_) | Error::UndefinedModularity) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<f64>,
    pub fitness: Option<f64>,
}

impl Chromosome {
    fn random(u: usize, rng: &mut impl Rng) -> Self {
        Chromosome {
            genes: (0..u).map(|_| rng.random::<f64>()).collect(),
            fitness: None,
        }
    }

    fn params(&self) -> Params {
        Params::new(self.genes.clone()).expect("genes are kept inside [0, 1]")
    }

    fn key(&self) -> Vec<i64> {
        self.genes.iter().map(|g| (g / CACHE_QUANTUM).round() as i64).collect()
    }
}

/// Per-generation summary, for plotting optimization trends.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Best fitness found so far.
    pub best_fitness: f64,
    /// Mean over the non-degenerate individuals of this generation.
    pub mean_fitness: f64,
    pub entropy: f64,
    pub modularity: f64,
    pub regions: usize,
}

pub const TRACE_CSV_HEADER: &str = "generation,best_fitness,mean_fitness,entropy,modularity,regions";

pub fn trace_csv(trace: &[GenerationRecord]) -> String {
    let mut out = format!("{TRACE_CSV_HEADER}\n");
    for r in trace {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.generation, r.best_fitness, r.mean_fitness, r.entropy, r.modularity, r.regions
        )
        .unwrap();
    }
    out
}

#[derive(Debug, Clone)]
pub struct TrainingOutcome {
    pub model: OccModel,
    pub best: Chromosome,
    pub evaluation: Evaluation,
    pub trace: Vec<GenerationRecord>,
}

/// Roulette-wheel pick over fitness shifted by the generation minimum;
/// degenerate individuals are never chosen.
fn roulette(pop: &[Chromosome], rng: &mut impl Rng) -> usize {
    let finite: Vec<f64> = pop.iter().filter_map(|c| c.fitness).filter(|f| f.is_finite()).collect();
    let min = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let max = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let eps = 1e-9 * (max - min).abs().max(1.0);
    let weights: Vec<f64> = pop
        .iter()
        .map(|c| match c.fitness {
            Some(f) if f.is_finite() => f - min + eps,
            _ => 0.0,
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let mut pick = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if *w > 0.0 {
            if pick < *w {
                return i;
            }
            pick -= w;
        }
    }
    weights.iter().rposition(|w| *w > 0.0).expect("at least one viable individual")
}

/// Two-point crossover; short chromosomes fall back to one cut or a whole swap.
fn crossover(a: &[f64], b: &[f64], rng: &mut impl Rng) -> (Vec<f64>, Vec<f64>) {
    let u = a.len();
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    let (lo, hi) = match u {
        0 => return (x, y),
        1 => {
            if rng.random::<bool>() {
                (0, 1)
            } else {
                (0, 0)
            }
        }
        2 => (1, 2),
        _ => {
            let c1 = rng.random_range(1..u);
            let mut c2 = rng.random_range(1..u - 1);
            if c2 >= c1 {
                c2 += 1;
            }
            (c1.min(c2), c1.max(c2))
        }
    };
    x[lo..hi].swap_with_slice(&mut y[lo..hi]);
    (x, y)
}

fn mutate(genes: &mut [f64], rate: f64, rng: &mut impl Rng) {
    for g in genes {
        if rng.random::<f64>() < rate {
            *g = rng.random::<f64>();
        }
        *g = g.clamp(0.0, 1.0);
    }
}

fn evaluate_population(
    problem: &TrainingProblem<'_>,
    pop: &mut [Chromosome],
    cache: &mut HashMap<Vec<i64>, Evaluation>,
) -> Result<()> {
    let mut pending: Vec<(Vec<i64>, Params)> = Vec::new();
    for c in pop.iter() {
        let key = c.key();
        if !cache.contains_key(&key) && !pending.iter().any(|(k, _)| *k == key) {
            pending.push((key, c.params()));
        }
    }
    let results: Vec<Evaluation> = pending
        .par_iter()
        .map(|(_, p)| problem.evaluate(p))
        .collect::<Result<_>>()?;
    for ((key, _), eval) in pending.into_iter().zip(results) {
        cache.insert(key, eval);
    }
    for c in pop.iter_mut() {
        c.fitness = Some(cache[&c.key()].fitness);
    }
    Ok(())
}

fn best_index(pop: &[Chromosome]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in pop.iter().enumerate() {
        let f = c.fitness.unwrap_or(f64::NEG_INFINITY);
        if f.is_finite() && best.is_none_or(|(_, b)| f > b) {
            best = Some((i, f));
        }
    }
    best.map(|(i, _)| i)
}

/// Runs the genetic algorithm and builds the model of the best individual.
pub fn evolve(problem: &TrainingProblem<'_>, ga: &GaConfig) -> Result<TrainingOutcome> {
    ga.validate()?;
    let u = problem.param_count();
    let mut rng = ChaCha8Rng::seed_from_u64(ga.seed);
    let mut cache: HashMap<Vec<i64>, Evaluation> = HashMap::new();

    let mut pop: Vec<Chromosome> = (0..ga.population_size).map(|_| Chromosome::random(u, &mut rng)).collect();
    evaluate_population(problem, &mut pop, &mut cache)?;

    let mut best: Option<Chromosome> = None;
    let mut trace = Vec::new();
    let mut stall = 0;
    for generation in 1..=ga.max_generations {
        if generation > 1 {
            let mut next = Vec::with_capacity(ga.population_size);
            if ga.elitism {
                if let Some(b) = &best {
                    next.push(b.clone());
                }
            }
            while next.len() < ga.population_size {
                let pa = roulette(&pop, &mut rng);
                let pb = roulette(&pop, &mut rng);
                let (mut x, mut y) = crossover(&pop[pa].genes, &pop[pb].genes, &mut rng);
                mutate(&mut x, ga.mutation_rate, &mut rng);
                mutate(&mut y, ga.mutation_rate, &mut rng);
                next.push(Chromosome { genes: x, fitness: None });
                if next.len() < ga.population_size {
                    next.push(Chromosome { genes: y, fitness: None });
                }
            }
            pop = next;
            evaluate_population(problem, &mut pop, &mut cache)?;
        }

        let Some(gen_best) = best_index(&pop) else {
            if best.is_none() {
                return Err(Error::TrainingFailed(
                    "every individual of the population is degenerate".into(),
                ));
            }
            continue;
        };
        let previous = best.as_ref().and_then(|b| b.fitness);
        if best.is_none() || pop[gen_best].fitness > previous {
            best = Some(pop[gen_best].clone());
        }
        let current = best.as_ref().expect("set above");
        let eval = &cache[&current.key()];
        let finite: Vec<f64> = pop.iter().filter_map(|c| c.fitness).filter(|f| f.is_finite()).collect();
        trace.push(GenerationRecord {
            generation,
            best_fitness: eval.fitness,
            mean_fitness: finite.iter().sum::<f64>() / finite.len() as f64,
            entropy: eval.entropy,
            modularity: eval.modularity_m,
            regions: eval.regions,
        });

        if generation > 1 {
            match previous {
                Some(prev) if (eval.fitness - prev).abs() <= STALL_TOLERANCE => stall += 1,
                _ => stall = 0,
            }
            if stall >= ga.stall_window {
                break;
            }
        }
    }

    let best = best.expect("the first generation has a viable individual");
    let (model, evaluation) = problem.build_model(&best.params())?;
    Ok(TrainingOutcome {
        model,
        best,
        evaluation,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> Vec<Pattern> {
        // two tight groups on the x axis, spread on y
        let mut v = Vec::new();
        for i in 0..6 {
            let dy = i as f64 * 0.1;
            v.push(Pattern::Features(vec![0.0 + 0.01 * i as f64, dy]));
            v.push(Pattern::Features(vec![1.0 - 0.01 * i as f64, dy]));
        }
        v
    }

    #[test]
    fn eta_endpoints() {
        let train = blobs();
        let p = Params::new(vec![0.8, 0.3]).unwrap();
        let both = ObjectiveConfig::default();
        let e = TrainingProblem::new(Measure::WeightedEuclidean, &train, None, &both)
            .unwrap()
            .fitness_eocc1(&p)
            .unwrap();
        let only_h = ObjectiveConfig { eta: 1.0, ..Default::default() };
        let h = TrainingProblem::new(Measure::WeightedEuclidean, &train, None, &only_h)
            .unwrap()
            .fitness_eocc1(&p)
            .unwrap();
        assert_eq!(h.fitness, e.entropy);
        let only_m = ObjectiveConfig { eta: 0.0, ..Default::default() };
        let m = TrainingProblem::new(Measure::WeightedEuclidean, &train, None, &only_m)
            .unwrap()
            .fitness_eocc1(&p)
            .unwrap();
        assert_eq!(m.fitness, e.modularity_m);
        assert!((0.0..=1.0).contains(&m.fitness));
        assert!((e.fitness - 0.5 * (e.entropy + e.modularity_m)).abs() < 1e-9);
    }

    #[test]
    fn zero_params_are_degenerate() {
        let train = blobs();
        let cfg = ObjectiveConfig::default();
        let problem = TrainingProblem::new(Measure::WeightedEuclidean, &train, None, &cfg).unwrap();
        let e = problem.fitness_eocc1(&Params::new(vec![0.0, 0.0]).unwrap()).unwrap();
        assert!(e.is_degenerate());
        assert!(problem.build_model(&Params::new(vec![0.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn eocc2_requires_both_classes() {
        let train = blobs();
        let cfg = ObjectiveConfig { scheme: Scheme::Eocc2, ..Default::default() };
        assert!(TrainingProblem::new(Measure::WeightedEuclidean, &train, None, &cfg).is_err());
        let val = vec![Pattern::Features(vec![0.0, 0.0])];
        let labels = vec![true];
        assert!(matches!(
            TrainingProblem::new(Measure::WeightedEuclidean, &train, Some((&val, &labels)), &cfg),
            Err(Error::Configuration(_))
        ));
        let labels = vec![false];
        assert!(TrainingProblem::new(Measure::WeightedEuclidean, &train, Some((&val, &labels)), &cfg).is_err());
    }

    #[test]
    fn crossover_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = [0.0; 5];
        let b = [1.0; 5];
        for _ in 0..100 {
            let (x, y) = crossover(&a, &b, &mut rng);
            for i in 0..5 {
                assert_eq!(x[i] + y[i], 1.0);
            }
            // a two-point exchange leaves both ends with the first parent
            assert_eq!(x[0], 0.0);
            let swapped = x.iter().filter(|g| **g == 1.0).count();
            assert!((1..=3).contains(&swapped));
            let first = x.iter().position(|g| *g == 1.0).unwrap();
            assert!(x[first..first + swapped].iter().all(|g| *g == 1.0));
        }
        let (x, _) = crossover(&[0.0, 0.0], &[1.0, 1.0], &mut rng);
        assert_eq!(x, vec![0.0, 1.0]);
    }

    #[test]
    fn roulette_skips_degenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pop = vec![
            Chromosome { genes: vec![], fitness: Some(f64::NEG_INFINITY) },
            Chromosome { genes: vec![], fitness: Some(-5.0) },
            Chromosome { genes: vec![], fitness: Some(5.0) },
        ];
        let mut counts = [0; 3];
        for _ in 0..1000 {
            counts[roulette(&pop, &mut rng)] += 1;
        }
        assert_eq!(counts[0], 0);
        assert!(counts[2] > 990);
    }

    #[test]
    fn mutation_stays_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut g = vec![0.5; 50];
        mutate(&mut g, 1.0, &mut rng);
        assert!(g.iter().all(|x| (0.0..=1.0).contains(x)));
        assert!(g.iter().any(|x| *x != 0.5));
    }
}
