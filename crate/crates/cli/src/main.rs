//! `eocc`: train, evaluate and apply entropic one-class classifiers.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use eocc::data::{load_feature_csv, load_graph_file, render_graphs, train_test, write_feature_csv, Dataset, NoiseSigma};
use eocc::dissimilarity::{Measure, Pattern};
use eocc::fuzzy::{TConorm, TauRule};
use eocc::metrics::{mean_std, EvaluationReport, REPORT_CSV_HEADER};
use eocc::model_io::{load_model, save_model};
use eocc::pipeline::{evaluate_raw, prepare, train_prepared, ExperimentConfig, ValidationSource, TRAIN_FRACTION};
use eocc::scenarios::Scenario;
use eocc::training::{trace_csv, GaConfig, ObjectiveConfig, Scheme};

#[derive(Parser)]
#[command(name = "eocc", version, about = "Entropic one-class classifier", args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one model per seed.
    Train(TrainArgs),
    /// Evaluate trained models on their test sets.
    Evaluate(EvaluateArgs),
    /// Score patterns with a single model.
    Classify(ClassifyArgs),
    /// Write the synthetic scenario datasets.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Eocc1,
    Eocc2,
    #[value(name = "eocc2-holdout")]
    Eocc2Holdout,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ValidationArg {
    Noise,
    Holdout,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// `.csv` files are feature tables, anything else is a graph file.
    Auto,
    Csv,
    Graph,
}

#[derive(Args, Clone)]
struct DataArgs {
    /// Feature CSV or graph file.
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    target_class: String,
    /// Class column of feature CSVs.
    #[arg(long, default_value = "label")]
    label_column: String,
    #[arg(long, value_enum, default_value = "auto")]
    format: FormatArg,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Separate test file; every pattern of `--data` is then used for training.
    #[arg(long)]
    test_data: Option<PathBuf>,
    /// Share of the target class trained on when no test file is given.
    #[arg(long, default_value_t = TRAIN_FRACTION)]
    train_fraction: f64,
    #[arg(long, value_enum, default_value = "eocc1")]
    scheme: SchemeArg,
    /// Validation source; defaults to noise for eocc2 and holdout for eocc2-holdout.
    #[arg(long, value_enum)]
    validation: Option<ValidationArg>,
    /// Share of each class of the test split sampled for validation.
    #[arg(long, default_value_t = eocc::data::VALIDATION_FRACTION)]
    validation_fraction: f64,
    /// Validation noise as a multiple of each feature's training standard deviation.
    #[arg(long, default_value_t = 0.05)]
    noise_sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = eocc::graph::DEFAULT_GAMMA)]
    gamma: f64,
    /// Divide the entropy estimate by d / gamma.
    #[arg(long)]
    entropy_rescale: bool,
    #[arg(long, default_value = "max", value_parser = parse_tconorm)]
    tconorm: TConorm,
    #[arg(long, default_value = "mst_edges", value_parser = parse_tau_rule)]
    tau_rule: TauRule,
    /// Dissimilarity measure; defaults to weighted_euclidean for CSVs and graph_edit for graphs.
    #[arg(long, value_parser = parse_measure)]
    measure: Option<Measure>,
    #[arg(long, default_value_t = 30)]
    pop: usize,
    #[arg(long, default_value_t = 0.3)]
    mutation_rate: f64,
    #[arg(long, default_value_t = 100)]
    generations: usize,
    #[arg(long, default_value_t = 10)]
    stall: usize,
    /// Comma-separated seeds or half-open ranges such as `0..10`.
    #[arg(long, default_value = "0..10", value_parser = parse_seeds)]
    seeds: Seeds,
    /// Standardize features with training-split statistics.
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    out: PathBuf,
    /// Flat `key = value` file of flag values; command-line flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Directory written by `train`.
    #[arg(long)]
    models: PathBuf,
    /// Evaluate every model on this file instead of its own test split.
    #[arg(long)]
    test_data: Option<PathBuf>,
    #[arg(long)]
    target_class: Option<String>,
    #[arg(long, default_value = "label")]
    label_column: String,
    #[arg(long, value_enum, default_value = "auto")]
    format: FormatArg,
    /// Defaults to the models directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    /// Output CSV; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Scenario name, or `all`.
    #[arg(long, default_value = "all")]
    scenario: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Debug)]
struct Seeds(Vec<u64>);

fn parse_seeds(s: &str) -> std::result::Result<Seeds, String> {
    let mut seeds = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.parse().map_err(|_| format!("invalid seed `{a}`"))?;
            let b: u64 = b.parse().map_err(|_| format!("invalid seed `{b}`"))?;
            seeds.extend(a..b);
        } else {
            seeds.push(part.parse().map_err(|_| format!("invalid seed `{part}`"))?);
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    if seeds.is_empty() {
        return Err("no seeds given".into());
    }
    Ok(Seeds(seeds))
}

fn parse_tconorm(s: &str) -> std::result::Result<TConorm, String> {
    TConorm::from_name(s).ok_or_else(|| format!("unknown t-conorm `{s}` (max, probabilistic_sum)"))
}

fn parse_tau_rule(s: &str) -> std::result::Result<TauRule, String> {
    TauRule::from_name(s).ok_or_else(|| format!("unknown tau rule `{s}` (mst_edges, pairwise_rms)"))
}

fn parse_measure(s: &str) -> std::result::Result<Measure, String> {
    Measure::from_name(s).ok_or_else(|| format!("unknown measure `{s}` (weighted_euclidean, graph_edit)"))
}

fn is_csv(path: &Path, format: FormatArg) -> bool {
    match format {
        FormatArg::Csv => true,
        FormatArg::Graph => false,
        FormatArg::Auto => path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")),
    }
}

fn load(path: &Path, format: FormatArg, label_column: &str, target: &str) -> Result<Dataset> {
    let ds = if is_csv(path, format) {
        load_feature_csv(path, label_column, target)
    } else {
        load_graph_file(path, target)
    };
    ds.with_context(|| format!("loading {}", path.display()))
}

/// Writes the patterns at `indices` in the format they were read from.
fn write_patterns(ds: &Dataset, indices: &[usize], path: &Path) -> Result<()> {
    let patterns = ds.select(indices);
    let labels: Vec<String> = indices.iter().map(|&i| ds.labels[i].clone()).collect();
    match patterns.first() {
        Some(Pattern::Graph(_)) => {
            let graphs: Vec<(&str, &str, &eocc::dissimilarity::LabeledGraph)> = indices
                .iter()
                .map(|&i| match &ds.patterns[i] {
                    Pattern::Graph(g) => Ok((ds.ids[i].as_str(), ds.labels[i].as_str(), g)),
                    Pattern::Features(_) => bail!("mixed pattern kinds"),
                })
                .collect::<Result<_>>()?;
            fs::write(path, render_graphs(graphs)).with_context(|| format!("writing {}", path.display()))
        }
        _ => Ok(write_feature_csv(path, &ds.feature_names, &patterns, &labels)?),
    }
}

fn write(path: &Path, text: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn experiment(a: &TrainArgs, graphs: bool) -> Result<ExperimentConfig> {
    let scheme = match a.scheme {
        SchemeArg::Eocc1 => Scheme::Eocc1,
        SchemeArg::Eocc2 | SchemeArg::Eocc2Holdout => Scheme::Eocc2,
    };
    let validation = match (a.validation, a.scheme) {
        (Some(ValidationArg::Noise), _) | (None, SchemeArg::Eocc2) => {
            Some(ValidationSource::Noise(NoiseSigma::RelativeToTrainStd(a.noise_sigma)))
        }
        (Some(ValidationArg::Holdout), _) | (None, SchemeArg::Eocc2Holdout) => Some(ValidationSource::Holdout),
        (None, SchemeArg::Eocc1) => None,
    };
    if graphs && matches!(validation, Some(ValidationSource::Noise(_))) {
        bail!("noise validation needs feature data; use --validation holdout for graphs");
    }
    let measure = a
        .measure
        .unwrap_or(if graphs { Measure::GraphEdit } else { Measure::WeightedEuclidean });
    let cfg = ExperimentConfig {
        measure,
        objective: ObjectiveConfig {
            eta: a.eta,
            beta: a.beta,
            gamma: a.gamma,
            scheme,
            entropy_rescale: a.entropy_rescale,
            tconorm: a.tconorm,
            tau_rule: a.tau_rule,
            ..Default::default()
        },
        ga: GaConfig {
            population_size: a.pop,
            mutation_rate: a.mutation_rate,
            max_generations: a.generations,
            stall_window: a.stall,
            ..Default::default()
        },
        normalize: a.normalize,
        train_fraction: a.train_fraction,
        validation,
        validation_fraction: a.validation_fraction,
    };
    cfg.objective.validate()?;
    cfg.ga.validate()?;
    Ok(cfg)
}

fn model_path(dir: &Path, seed: u64) -> PathBuf {
    dir.join(format!("model_seed{seed}.eocc"))
}

fn test_path(dir: &Path, seed: u64, csv: bool) -> PathBuf {
    dir.join(format!("test_seed{seed}.{}", if csv { "csv" } else { "graphs" }))
}

struct TrainRecord {
    seed: u64,
    fitness: f64,
    entropy: f64,
    modularity: f64,
    regions: usize,
    generations: usize,
}

fn cmd_train(a: TrainArgs) -> Result<()> {
    let d = &a.data;
    let mut ds = load(&d.data, d.format, &d.label_column, &d.target_class)?;
    if let Some(test) = &a.test_data {
        let test = load(test, d.format, &d.label_column, &d.target_class)?;
        ds = train_test(ds, test).context("combining training and test files")?;
    }
    let csv = ds.patterns.first().is_some_and(|p| p.as_features().is_some());
    let cfg = experiment(&a, !csv)?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;

    let records: Vec<TrainRecord> = a
        .seeds
        .0
        .par_iter()
        .map(|&seed| -> Result<TrainRecord> {
            let prepared = prepare(&ds, &cfg, seed).with_context(|| format!("preparing data (seed {seed})"))?;
            let outcome = train_prepared(&prepared, &cfg, seed).with_context(|| format!("training (seed {seed})"))?;
            save_model(&outcome.model, &model_path(&a.out, seed))?;
            write(&a.out.join(format!("trace_seed{seed}.csv")), trace_csv(&outcome.trace))?;
            write_patterns(&ds, &prepared.splits.test, &test_path(&a.out, seed, csv))?;
            let e = &outcome.evaluation;
            Ok(TrainRecord {
                seed,
                fitness: e.fitness,
                entropy: e.entropy,
                modularity: e.modularity_m,
                regions: e.regions,
                generations: outcome.trace.len(),
            })
        })
        .collect::<Result<_>>()?;

    let mut table = String::from("seed,fitness,entropy,modularity,regions,generations\n");
    for r in &records {
        table.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.seed, r.fitness, r.entropy, r.modularity, r.regions, r.generations
        ));
    }
    write(&a.out.join("training.csv"), table)?;
    let (m, s) = mean_std(&records.iter().map(|r| r.fitness).collect::<Vec<_>>());
    let (rm, rs) = mean_std(&records.iter().map(|r| r.regions as f64).collect::<Vec<_>>());
    let summary = format!(
        "runs     {}\nfitness  {m:.6}({s:.6})\nregions  {rm:.2}({rs:.2})\n",
        records.len()
    );
    write(&a.out.join("training_summary.txt"), &summary)?;
    print!("{summary}");
    Ok(())
}

fn seeds_in(dir: &Path) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let name = entry?.file_name();
        let name = name.to_string_lossy();
        if let Some(seed) = name.strip_prefix("model_seed").and_then(|r| r.strip_suffix(".eocc")) {
            if let Ok(seed) = seed.parse() {
                seeds.push(seed);
            }
        }
    }
    seeds.sort_unstable();
    if seeds.is_empty() {
        bail!("no model_seed*.eocc files in {}", dir.display());
    }
    Ok(seeds)
}

/// Evaluates every model of a `train` output directory.
fn cmd_evaluate(a: EvaluateArgs) -> Result<()> {
    let out = a.out.clone().unwrap_or_else(|| a.models.clone());
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let target = match &a.target_class {
        Some(t) => t.clone(),
        None => fs::read_to_string(a.models.join("target_class"))
            .map(|s| s.trim().to_string())
            .context("--target-class is required (no target_class file in the models directory)")?,
    };
    let seeds = seeds_in(&a.models)?;
    let reports: Vec<(u64, EvaluationReport)> = seeds
        .par_iter()
        .map(|&seed| -> Result<(u64, EvaluationReport)> {
            let model = load_model(&model_path(&a.models, seed))?;
            let test = match &a.test_data {
                Some(p) => p.clone(),
                None => {
                    let csv = test_path(&a.models, seed, true);
                    if csv.exists() {
                        csv
                    } else {
                        test_path(&a.models, seed, false)
                    }
                }
            };
            let ds = load(&test, a.format, &a.label_column, &target)?;
            let report = evaluate_raw(&model, &ds).with_context(|| format!("evaluating model of seed {seed}"))?;
            Ok((seed, report))
        })
        .collect::<Result<_>>()?;

    let mut rows = format!("seed,{REPORT_CSV_HEADER}\n");
    for (seed, r) in &reports {
        write(&out.join(format!("report_seed{seed}.txt")), r.to_text())?;
        write(&out.join(format!("memberships_seed{seed}.csv")), r.patterns_csv())?;
        rows.push_str(&format!("{seed},{}\n", r.csv_row()));
    }
    write(&out.join("reports.csv"), rows)?;

    let stat = |f: &dyn Fn(&EvaluationReport) -> f64| mean_std(&reports.iter().map(|(_, r)| f(r)).collect::<Vec<_>>());
    let metrics: [(&str, (f64, f64)); 5] = [
        ("auc", stat(&|r| r.auc)),
        ("accuracy", stat(&|r| r.stats.accuracy)),
        ("precision", stat(&|r| r.stats.precision)),
        ("recall", stat(&|r| r.stats.recall)),
        ("f_measure", stat(&|r| r.stats.f_measure)),
    ];
    let mut csv = String::from("metric,mean,std\n");
    let mut text = format!("runs       {}\n", reports.len());
    for (name, (m, s)) in metrics {
        csv.push_str(&format!("{name},{m},{s}\n"));
        text.push_str(&format!("{name:<10} {m:.3}({s:.3})\n"));
    }
    write(&out.join("summary.csv"), csv)?;
    write(&out.join("summary.txt"), &text)?;
    print!("{text}");
    Ok(())
}

fn cmd_classify(a: ClassifyArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let d = &a.data;
    let ds = load(&d.data, d.format, &d.label_column, &d.target_class)?;
    let decisions = model.classify_batch(&ds.patterns).context("classifying")?;
    let mut csv = String::from("id,label,soft,hard\n");
    for (i, dec) in decisions.iter().enumerate() {
        csv.push_str(&format!("{},{},{},{}\n", ds.ids[i], ds.labels[i], dec.soft, dec.hard));
    }
    match &a.out {
        Some(p) => write(p, csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn cmd_synth(a: SynthArgs) -> Result<()> {
    let scenarios: Vec<Scenario> = if a.scenario == "all" {
        Scenario::ALL.to_vec()
    } else {
        vec![Scenario::from_name(&a.scenario).with_context(|| {
            let names: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
            format!("unknown scenario `{}` (one of {}, all)", a.scenario, names.join(", "))
        })?]
    };
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut manifest = String::new();
    for s in scenarios {
        let ds = s.generate(a.seed)?;
        let name = s.name();
        write_patterns(&ds, &ds.splits.train, &a.out.join(format!("{name}_train.csv")))?;
        write_patterns(&ds, &ds.splits.test, &a.out.join(format!("{name}_test.csv")))?;
        manifest.push_str(&s.manifest(a.seed));
        manifest.push_str(&format!("files {name}_train.csv {name}_test.csv\n\n"));
        println!("{name}: {} training, {} test patterns", ds.splits.train.len(), ds.splits.test.len());
    }
    write(&a.out.join("manifest.txt"), manifest)
}

/// Expands `--config FILE` into flags placed before the explicit ones, so
/// that explicit flags override file values.
fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (i, arg) in args.iter().enumerate() {
        if let Some(p) = arg.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else if arg == "--config" {
            path = args.get(i + 1).cloned();
        }
    }
    let Some(path) = path else { return Ok(args) };
    if args.len() < 2 {
        return Ok(args);
    }
    let text = fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let mut flags = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{path}:{}: expected `key = value`", n + 1);
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            bail!("{path}:{}: config files cannot include other config files", n + 1);
        }
        match value {
            "true" => flags.push(format!("--{key}")),
            "false" => {}
            _ => {
                flags.push(format!("--{key}"));
                flags.push(value.to_string());
            }
        }
    }
    let mut out = args[..2].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[2..]);
    Ok(out)
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    let args = expand_config(std::env::args().collect())?;
    match Cli::parse_from(args).command {
        Command::Train(a) => {
            let out = a.out.clone();
            let target = a.data.target_class.clone();
            cmd_train(a)?;
            write(&out.join("target_class"), format!("{target}\n"))
        }
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Synth(a) => cmd_synth(a),
    }
}
