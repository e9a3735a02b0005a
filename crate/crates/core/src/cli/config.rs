//! Experiment configuration: JSON config files merged under command-line
//! flags, and the resolved form written next to every output.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::GeneratorConfig;
use crate::error::{Error, Result};
use crate::moea::{InitStrategy, MoeaConfig, ReferencePointMode};
use crate::objectives::{Evaluation, ObjectiveParams, ObjectiveSpec, SizeDirection};

pub const EXPERIMENT_FILE: &str = "experiment.json";
pub const OUTPUT_ROOT_ENV: &str = "MOFS_OUTPUT_ROOT";
pub const DEFAULT_OUTPUT_ROOT: &str = "mofs-out";

/// Where a run's data comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatasetSource {
    Path(PathBuf),
    Inline(GeneratorConfig),
}

/// Contents of a `--config` file. Every key is optional; flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub dataset: Option<DatasetSource>,
    pub generator: Option<GeneratorConfig>,
    pub test_fraction: Option<f64>,
    pub objective: Option<Evaluation>,
    pub size: Option<SizeDirection>,
    pub init: Option<InitStrategy>,
    pub population_size: Option<usize>,
    pub generations: Option<usize>,
    pub crossover_probability: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub reference_point_mode: Option<ReferencePointMode>,
    pub objective_params: Option<ObjectiveParams>,
    pub master_seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub clusters: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile> {
        if !path.is_file() {
            return Err(Error::Missing {
                what: "config file",
                path: path.to_path_buf(),
            });
        }
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
    }

    pub fn load_opt(path: Option<&Path>) -> Result<ConfigFile> {
        path.map_or(Ok(ConfigFile::default()), ConfigFile::load)
    }
}

/// Fully resolved settings of one run; enough to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    pub spec: ObjectiveSpec,
    pub moea: MoeaConfig,
    pub objective_params: ObjectiveParams,
    /// Seeds the objective evaluations of this run.
    pub objective_seed: u64,
    /// Seeds held-out test evaluation; shared by all runs of a suite.
    pub master_seed: u64,
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn save(&self, dir: &Path) -> Result<()> {
        let path = dir.join(EXPERIMENT_FILE);
        fs::write(&path, serde_json::to_string_pretty(self)? + "\n").map_err(|e| Error::io(&path, e))
    }

    pub fn load(dir: &Path) -> Result<ExperimentConfig> {
        let path = dir.join(EXPERIMENT_FILE);
        if !path.is_file() {
            return Err(Error::Missing {
                what: "experiment config",
                path,
            });
        }
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::schema(&path, e.to_string()))
    }

    pub fn spec_of(evaluation: Evaluation, size: SizeDirection) -> ObjectiveSpec {
        ObjectiveSpec::new(evaluation, size)
    }
}

/// `MOFS_OUTPUT_ROOT` or the built-in default.
pub fn output_root(flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_ROOT))
}
