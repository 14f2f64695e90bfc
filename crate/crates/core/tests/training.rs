use eocc::data::{NoiseSigma, Dataset};
use eocc::dissimilarity::{Measure, Params};
use eocc::model_io::{load_model, save_model};
use eocc::pipeline::{evaluate_prepared, evaluate_raw, prepare, run_seed, train_prepared, ExperimentConfig, ValidationSource};
use eocc::scenarios::Scenario;
use eocc::training::{evolve, GaConfig, ObjectiveConfig, Scheme, TrainingProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quick(scheme: Scheme) -> ExperimentConfig {
    ExperimentConfig {
        objective: ObjectiveConfig { scheme, ..Default::default() },
        ga: GaConfig { population_size: 10, max_generations: 8, ..Default::default() },
        validation: (scheme == Scheme::Eocc2).then_some(ValidationSource::Noise(NoiseSigma::default())),
        ..Default::default()
    }
}

fn clusters() -> Dataset {
    Scenario::ThreeClusters.generate(3).unwrap()
}

#[test]
fn same_seed_same_run() {
    let ds = clusters();
    for scheme in [Scheme::Eocc1, Scheme::Eocc2] {
        let cfg = quick(scheme);
        let a = run_seed(&ds, &cfg, 5).unwrap();
        let b = run_seed(&ds, &cfg, 5).unwrap();
        assert_eq!(a.outcome.best, b.outcome.best);
        assert_eq!(a.outcome.trace, b.outcome.trace);
        assert_eq!(a.report.csv_row(), b.report.csv_row());
        assert_eq!(a.report.patterns_csv(), b.report.patterns_csv());
    }
}

#[test]
fn best_fitness_never_drops() {
    let ds = clusters();
    for seed in 0..4 {
        let r = run_seed(&ds, &quick(Scheme::Eocc1), seed).unwrap();
        for w in r.outcome.trace.windows(2) {
            assert!(w[1].best_fitness >= w[0].best_fitness, "seed {seed}");
        }
        assert_eq!(r.outcome.trace.last().unwrap().best_fitness, r.outcome.evaluation.fitness);
    }
}

#[test]
fn single_generation_keeps_fitter_of_two() {
    let ds = prepare(&clusters(), &ExperimentConfig::default(), 2).unwrap();
    let train = ds.train_patterns();
    let cfg = ObjectiveConfig::default();
    let problem = TrainingProblem::new(Measure::WeightedEuclidean, &train, None, &cfg).unwrap();
    let u = problem.param_count();
    for seed in 0..5u64 {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let genes: Vec<Vec<f64>> = (0..2).map(|_| (0..u).map(|_| r.random::<f64>()).collect()).collect();
        let fits: Vec<f64> = genes
            .iter()
            .map(|g| problem.evaluate(&Params::new(g.clone()).unwrap()).unwrap().fitness)
            .collect();
        let want = if fits[1] > fits[0] { 1 } else { 0 };

        let ga = GaConfig { population_size: 2, max_generations: 1, seed, ..Default::default() };
        let out = evolve(&problem, &ga).unwrap();
        assert_eq!(out.best.genes, genes[want]);
        assert_eq!(out.evaluation.fitness, fits[want]);
        assert_eq!(out.trace.len(), 1);
    }
}

#[test]
fn eocc2_scores_every_prefix() {
    let cfg = quick(Scheme::Eocc2);
    let ds = prepare(&clusters(), &cfg, 1).unwrap();
    let train = ds.train_patterns();
    let (vp, vl) = ds.labeled(ds.splits.validation.as_ref().unwrap());
    let problem = TrainingProblem::new(Measure::WeightedEuclidean, &train, Some((&vp, &vl)), &cfg.objective).unwrap();
    let e = problem.fitness_eocc2(&Params::ones(2)).unwrap();
    assert_eq!(e.modularity_evaluations, train.len() - 1);
    assert!(e.accuracy.is_some());
}

#[test]
fn eocc2_without_validation_is_rejected() {
    let ds = clusters();
    let cfg = ExperimentConfig { validation: None, ..quick(Scheme::Eocc2) };
    let err = run_seed(&ds, &cfg, 0).unwrap_err().to_string();
    assert!(err.contains("validation"), "{err}");
}

#[test]
fn saved_model_decides_identically() {
    let cfg = ExperimentConfig { normalize: true, ..quick(Scheme::Eocc1) };
    let ds = prepare(&clusters(), &cfg, 4).unwrap();
    let out = train_prepared(&ds, &cfg, 4).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.eocc");
    save_model(&out.model, &path).unwrap();
    let back = load_model(&path).unwrap();
    assert_eq!(back, out.model);
    let raw = clusters();
    assert_eq!(
        evaluate_raw(&back, &raw).unwrap().patterns_csv(),
        evaluate_raw(&out.model, &raw).unwrap().patterns_csv()
    );
}

#[test]
fn raw_and_prepared_evaluation_agree() {
    let cfg = ExperimentConfig { normalize: true, ..quick(Scheme::Eocc1) };
    let raw = clusters();
    let ds = prepare(&raw, &cfg, 6).unwrap();
    let model = train_prepared(&ds, &cfg, 6).unwrap().model;
    let prepared = evaluate_prepared(&model, &ds).unwrap();
    let all = evaluate_raw(&model, &raw).unwrap();
    for p in &prepared.per_pattern {
        let q = all.per_pattern.iter().find(|q| q.id == p.id).unwrap();
        assert_eq!(p.hard, q.hard, "{}", p.id);
        assert!((p.soft - q.soft).abs() <= 1e-12, "{}", p.id);
    }
}
