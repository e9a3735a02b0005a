use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ConfigFile, DatasetSource, ExperimentConfig};
use super::{AnalyzeArgs, GenerateArgs, InitKind, RunArgs, SearchArgs, SuiteArgs};
use crate::analysis::{
    cluster_solutions, compare_to_ground_truth, composition_report, cross_formulation_table, evaluate_test_accuracy,
    extract_front, write_clusters, write_comparison, write_composition, write_front, write_ground_truth,
    write_linkage, CLUSTERS_FILE, COMPARISON_FILE, COMPOSITION_FILE, FRONT_FILE, GROUND_TRUTH_FILE, LINKAGE_FILE,
};
use crate::dataset::{self, generate, split, SplitDataset, SyntheticDataset, DEFAULT_TEST_FRACTION};
use crate::error::{Error, Result};
use crate::moea::{load_history, run, save_history, InitStrategy, MoeaConfig, ReferencePointMode, RunHistory};
use crate::objectives::{EvaluationContext, Evaluator, ObjectiveSpec};
use crate::seed::derive_seed;

pub const FAILURES_FILE: &str = "failures.json";
pub const SUITE_FILE: &str = "suite.json";

/// Loads a saved dataset, or generates an inline one and splits it with its
/// own master seed.
pub fn load_dataset(source: &DatasetSource, test_fraction: f64) -> Result<(SyntheticDataset, SplitDataset)> {
    match source {
        DatasetSource::Path(dir) => dataset::load(dir),
        DatasetSource::Inline(cfg) => {
            let ds = generate(cfg)?;
            let sp = split(&ds, test_fraction, cfg.master_seed)?;
            Ok((ds, sp))
        }
    }
}

pub fn cmd_generate(args: &GenerateArgs, root: &Path) -> Result<String> {
    let file = ConfigFile::load_opt(args.config.as_deref())?;
    let mut cfg = file.generator.clone().unwrap_or_default();
    if let Some(n) = args.n_samples {
        cfg.n_samples = n;
    }
    if let Some(c) = args.n_classes {
        cfg.n_classes = c;
    }
    if let Some(seed) = args.seed.or(file.master_seed) {
        cfg.master_seed = seed;
    }
    let test_fraction = args.test_fraction.or(file.test_fraction).unwrap_or(DEFAULT_TEST_FRACTION);
    let out = args.out.clone().or(file.output).unwrap_or_else(|| root.join("dataset"));

    cfg.validate()?;
    let ds = generate(&cfg)?;
    let sp = split(&ds, test_fraction, cfg.master_seed)?;
    dataset::save(&ds, &sp, &out)?;
    Ok(ds.fingerprint())
}

fn kind_of(init: &InitStrategy) -> InitKind {
    match init {
        InitStrategy::BinaryRandom { .. } => InitKind::Random,
        InitStrategy::Segmented { .. } => InitKind::Segmented,
        InitStrategy::FixedCardinality { .. } => InitKind::Fixed,
    }
}

/// Builds the initialisation from flags, falling back to the config file
/// when it names the same strategy.
fn resolve_init(
    kind: Option<InitKind>,
    init_p: Option<&[f64]>,
    init_k: Option<usize>,
    file: Option<&InitStrategy>,
) -> Result<InitStrategy> {
    let kind = kind.or(file.map(kind_of)).unwrap_or(InitKind::Random);
    let file = file.filter(|f| kind_of(f) == kind);
    match kind {
        InitKind::Random => {
            if init_k.is_some() {
                return Err(Error::InvalidFlags("--init-k only applies to --init fixed".into()));
            }
            let p = match init_p {
                Some([p]) => *p,
                Some(_) => return Err(Error::InvalidFlags("--init random takes a single --init-p".into())),
                None => match file {
                    Some(InitStrategy::BinaryRandom { p }) => *p,
                    _ => 0.5,
                },
            };
            Ok(InitStrategy::BinaryRandom { p })
        }
        InitKind::Segmented => {
            if init_k.is_some() {
                return Err(Error::InvalidFlags("--init-k only applies to --init fixed".into()));
            }
            Ok(match (init_p, file) {
                (Some(ps), _) => InitStrategy::Segmented { p_list: ps.to_vec() },
                (None, Some(f)) => f.clone(),
                (None, None) => InitStrategy::default_segmented(),
            })
        }
        InitKind::Fixed => {
            if init_p.is_some() {
                return Err(Error::InvalidFlags("--init-p does not apply to --init fixed".into()));
            }
            match (init_k, file) {
                (Some(k), _) => Ok(InitStrategy::FixedCardinality { k }),
                (None, Some(f)) => Ok(f.clone()),
                (None, None) => Err(Error::InvalidFlags("--init fixed requires --init-k".into())),
            }
        }
    }
}

/// Search settings resolved as flags, then config file, then defaults.
struct Resolved {
    file: ConfigFile,
    dataset: DatasetSource,
    test_fraction: f64,
    moea: MoeaConfig,
    master_seed: u64,
    fixed_ref: bool,
}

fn resolve_search(args: &SearchArgs, root: &Path) -> Result<Resolved> {
    let file = ConfigFile::load_opt(args.config.as_deref())?;
    let dataset = match (&args.data, &file.dataset) {
        (Some(p), _) => DatasetSource::Path(p.clone()),
        (None, Some(src)) => src.clone(),
        (None, None) => DatasetSource::Path(root.join("dataset")),
    };
    let master_seed = args.seed.or(file.master_seed).unwrap_or(0);
    let defaults = MoeaConfig::default();
    let moea = MoeaConfig {
        population_size: args.pop.or(file.population_size).unwrap_or(defaults.population_size),
        generations: args.gens.or(file.generations).unwrap_or(defaults.generations),
        init: defaults.init,
        crossover_probability: args
            .crossover
            .or(file.crossover_probability)
            .unwrap_or(defaults.crossover_probability),
        mutation_rate: args.mutation.or(file.mutation_rate),
        reference_point_mode: file.reference_point_mode.unwrap_or(defaults.reference_point_mode),
        master_seed,
    };
    Ok(Resolved {
        dataset,
        test_fraction: file.test_fraction.unwrap_or(DEFAULT_TEST_FRACTION),
        moea,
        master_seed,
        fixed_ref: args.fixed_ref,
        file,
    })
}

/// Runs one experiment against an already loaded split and writes its
/// directory.
fn execute(exp: &mut ExperimentConfig, sp: &SplitDataset, fingerprint: &str, fixed_ref: bool) -> Result<RunHistory> {
    let ctx = Arc::new(EvaluationContext::from_split(sp, exp.objective_params.clone(), exp.objective_seed)?);
    if fixed_ref {
        exp.moea.reference_point_mode = ReferencePointMode::fixed(ctx.reference_point(exp.spec));
    }
    exp.moea.validate(ctx.n_features())?;
    let evaluator = Evaluator::new(ctx);
    let history = run(exp.spec, &evaluator, &exp.moea)?.with_fingerprint(fingerprint);
    save_history(&history, &exp.output)?;
    exp.save(&exp.output)?;
    Ok(history)
}

fn run_name(spec: ObjectiveSpec, init: &InitStrategy) -> String {
    format!("{}_{}", spec.id(), init.name())
}

pub fn cmd_run(args: &RunArgs, root: &Path) -> Result<PathBuf> {
    let r = resolve_search(&args.search, root)?;
    let evaluation = args
        .objective
        .map(Into::into)
        .or(r.file.objective)
        .ok_or_else(|| Error::InvalidFlags("--objective is required".into()))?;
    let size = args
        .size
        .map(Into::into)
        .or(r.file.size)
        .ok_or_else(|| Error::InvalidFlags("--size is required".into()))?;
    let spec = ObjectiveSpec::new(evaluation, size);
    let init = resolve_init(
        args.init,
        args.search.init_p.as_deref(),
        args.search.init_k,
        r.file.init.as_ref(),
    )?;
    let output = args.search.out.clone().or(r.file.output.clone()).unwrap_or_else(|| {
        root.join("runs")
            .join(format!("{}_s{}", run_name(spec, &init), r.master_seed))
    });
    let (ds, sp) = load_dataset(&r.dataset, r.test_fraction)?;
    init.validate(ds.n_features())?;
    let mut exp = ExperimentConfig {
        dataset: r.dataset.clone(),
        spec,
        moea: MoeaConfig { init, ..r.moea },
        objective_params: r.file.objective_params.clone().unwrap_or_default(),
        objective_seed: r.master_seed,
        master_seed: r.master_seed,
        output,
    };
    let history = execute(&mut exp, &sp, &ds.fingerprint(), r.fixed_ref)?;
    eprintln!(
        "run {}: {} evaluations, {} cache hits",
        exp.output.display(),
        history.evaluations,
        history.cache_hits
    );
    Ok(exp.output)
}

/// Seed of one suite run; independent of which other runs exist.
pub fn suite_run_seed(master_seed: u64, spec: ObjectiveSpec, init: &InitStrategy) -> u64 {
    derive_seed(
        master_seed,
        &[
            "suite".into(),
            spec.evaluation.as_str().into(),
            spec.size_direction.as_str().into(),
            init.name().into(),
        ],
    )
}

/// The 18 (formulation, initialisation) pairs in table order.
pub fn suite_grid(random_p: f64, segmented: Vec<f64>, fixed_k: usize) -> Vec<(ObjectiveSpec, InitStrategy)> {
    let inits = [
        InitStrategy::BinaryRandom { p: random_p },
        InitStrategy::Segmented { p_list: segmented },
        InitStrategy::FixedCardinality { k: fixed_k },
    ];
    ObjectiveSpec::all()
        .into_iter()
        .flat_map(|spec| inits.iter().map(move |i| (spec, i.clone())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub run: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub dir: PathBuf,
    pub completed: Vec<String>,
    pub failures: Vec<RunFailure>,
}

#[derive(Debug, Serialize)]
struct SuiteManifest<'a> {
    master_seed: u64,
    dataset_fingerprint: String,
    runs: Vec<SuiteEntry<'a>>,
}

#[derive(Debug, Serialize)]
struct SuiteEntry<'a> {
    name: String,
    spec: ObjectiveSpec,
    init: &'a InitStrategy,
    run_seed: u64,
}

pub fn cmd_suite(args: &SuiteArgs, root: &Path) -> Result<SuiteOutcome> {
    let r = resolve_search(&args.search, root)?;
    if args.search.init_k == Some(0) {
        return Err(Error::InvalidFlags("--init-k must be at least 1".into()));
    }
    let (random_p, segmented) = match args.search.init_p.as_deref() {
        None => (0.5, vec![0.25, 0.5, 0.75]),
        Some([p]) => (*p, vec![0.25, 0.5, 0.75]),
        Some(ps) => (0.5, ps.to_vec()),
    };
    let grid = suite_grid(random_p, segmented, args.search.init_k.unwrap_or(1));
    let dir = args.search.out.clone().or(r.file.output.clone()).unwrap_or_else(|| root.join("suite"));
    let jobs = args.jobs.or(r.file.jobs).unwrap_or(1);
    if jobs == 0 {
        return Err(Error::InvalidFlags("--jobs must be at least 1".into()));
    }
    let (ds, sp) = load_dataset(&r.dataset, r.test_fraction)?;
    let fingerprint = ds.fingerprint();
    for (_, init) in &grid {
        init.validate(ds.n_features())?;
    }
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let params = r.file.objective_params.clone().unwrap_or_default();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let results: Vec<(String, Result<RunHistory>)> = pool.install(|| {
        grid.par_iter()
            .map(|(spec, init)| {
                let name = run_name(*spec, init);
                let seed = suite_run_seed(r.master_seed, *spec, init);
                let result = if args.inject_failure.as_deref() == Some(name.as_str()) {
                    Err(Error::Injected(name.clone()))
                } else {
                    let mut exp = ExperimentConfig {
                        dataset: r.dataset.clone(),
                        spec: *spec,
                        moea: MoeaConfig {
                            init: init.clone(),
                            master_seed: seed,
                            ..r.moea.clone()
                        },
                        objective_params: params.clone(),
                        objective_seed: seed,
                        master_seed: r.master_seed,
                        output: dir.join(&name),
                    };
                    execute(&mut exp, &sp, &fingerprint, r.fixed_ref)
                };
                match &result {
                    Ok(h) => eprintln!("suite: {name} done ({} evaluations)", h.evaluations),
                    Err(e) => eprintln!("suite: {name} failed: {e}"),
                }
                (name, result)
            })
            .collect()
    });

    let mut completed = Vec::new();
    let mut histories = Vec::new();
    let mut failures = Vec::new();
    for (name, result) in results {
        match result {
            Ok(h) => {
                completed.push(name);
                histories.push(h);
            }
            Err(e) => failures.push(RunFailure {
                run: name,
                error: e.to_string(),
            }),
        }
    }
    let rows = pool.install(|| cross_formulation_table(&histories, &sp, &params.forest, r.master_seed))?;
    write_comparison(&rows, &dir.join(COMPARISON_FILE))?;

    let manifest = SuiteManifest {
        master_seed: r.master_seed,
        dataset_fingerprint: fingerprint,
        runs: grid
            .iter()
            .map(|(spec, init)| SuiteEntry {
                name: run_name(*spec, init),
                spec: *spec,
                init,
                run_seed: suite_run_seed(r.master_seed, *spec, init),
            })
            .collect(),
    };
    let path = dir.join(SUITE_FILE);
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n").map_err(|e| Error::io(&path, e))?;
    let path = dir.join(FAILURES_FILE);
    fs::write(&path, serde_json::to_string_pretty(&failures)? + "\n").map_err(|e| Error::io(&path, e))?;

    Ok(SuiteOutcome {
        dir,
        completed,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOutcome {
    pub dir: PathBuf,
    pub n_records: usize,
    pub n_clusters: usize,
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<AnalyzeOutcome> {
    if !args.run.is_dir() {
        return Err(Error::Missing {
            what: "run",
            path: args.run.clone(),
        });
    }
    let history = load_history(&args.run)?;
    let experiment = ExperimentConfig::load(&args.run);
    let (source, test_fraction, master_seed) = match (&args.data, &experiment) {
        (Some(p), Ok(exp)) => (DatasetSource::Path(p.clone()), DEFAULT_TEST_FRACTION, exp.master_seed),
        (Some(p), Err(_)) => (DatasetSource::Path(p.clone()), DEFAULT_TEST_FRACTION, history.config.master_seed),
        (None, Ok(exp)) => (exp.dataset.clone(), DEFAULT_TEST_FRACTION, exp.master_seed),
        (None, Err(_)) => {
            return Err(Error::Missing {
                what: "dataset (pass --data)",
                path: args.run.clone(),
            })
        }
    };
    let (ds, sp) = load_dataset(&source, test_fraction)?;
    if let Some(fp) = &history.dataset_fingerprint {
        if *fp != ds.fingerprint() {
            return Err(Error::schema(&args.run, "run was produced on a different dataset"));
        }
    }
    let n_clusters = args.clusters.unwrap_or(4);
    if n_clusters == 0 {
        return Err(Error::InvalidFlags("--clusters must be at least 1".into()));
    }
    let out = args.out.clone().unwrap_or_else(|| args.run.clone());
    fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;

    let mut records = extract_front(&history);
    evaluate_test_accuracy(&mut records, &sp, &history.params.forest, master_seed)?;
    let clustering = match cluster_solutions(&records, n_clusters) {
        Ok(c) => c,
        Err(e @ Error::TooFewRecords { .. }) => {
            eprintln!("warning: {e}; reporting a single cluster");
            cluster_solutions(&records, 1)?
        }
        Err(e) => return Err(e),
    };
    for (r, label) in records.iter_mut().zip(&clustering.labels) {
        r.cluster_id = Some(label.clone());
    }
    let matrix = composition_report(&records, &clustering, &ds.kinds);
    let ctx = EvaluationContext::from_split(&sp, history.params.clone(), history.objective_seed)?;
    let truth = compare_to_ground_truth(&records, &sp, history.spec, &ctx, master_seed)?;

    write_front(&records, &out.join(FRONT_FILE))?;
    write_composition(&records, &matrix, &out.join(COMPOSITION_FILE))?;
    write_clusters(&matrix, &out.join(CLUSTERS_FILE))?;
    write_linkage(&clustering, &out.join(LINKAGE_FILE))?;
    write_ground_truth(&records, &truth, &out.join(GROUND_TRUTH_FILE))?;
    Ok(AnalyzeOutcome {
        dir: out,
        n_records: records.len(),
        n_clusters: clustering.n_clusters,
    })
}

