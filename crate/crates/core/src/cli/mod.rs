//! The `mofs` command line: `generate`, `run`, `suite` and `analyze`.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    cmd_analyze, cmd_generate, cmd_run, cmd_suite, load_dataset, suite_grid, suite_run_seed, AnalyzeOutcome,
    RunFailure, SuiteOutcome, FAILURES_FILE, SUITE_FILE,
};
pub use config::{
    output_root, ConfigFile, DatasetSource, ExperimentConfig, DEFAULT_OUTPUT_ROOT, EXPERIMENT_FILE, OUTPUT_ROOT_ENV,
};

use crate::error::Error;
use crate::objectives::{Evaluation, SizeDirection};

#[derive(Debug, Parser)]
#[command(name = "mofs", version, about = "Multiobjective unsupervised feature selection experiments")]
pub struct Cli {
    /// Root for default output locations [env: MOFS_OUTPUT_ROOT] [default: mofs-out]
    #[arg(long, global = true)]
    pub output_root: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the synthetic dataset and its train/test split.
    Generate(GenerateArgs),
    /// Run one objective formulation with one initialisation.
    Run(RunArgs),
    /// Run all 6 formulations x 3 initialisations and the comparison table.
    Suite(SuiteArgs),
    /// Extract, cluster and report the final front of a run.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// JSON config file (keys: generator, test_fraction, master_seed, output)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed of generation and split [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of samples [default: 1000]
    #[arg(long)]
    pub n_samples: Option<usize>,
    /// Number of classes [default: 3]
    #[arg(long)]
    pub n_classes: Option<usize>,
    /// Fraction of each class held out for testing [default: 0.3]
    #[arg(long)]
    pub test_fraction: Option<f64>,
    /// Output directory [default: <output-root>/dataset]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InitKind {
    Random,
    Segmented,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ObjectiveArg {
    Silhouette,
    Accuracy,
    PcaLoss,
}

impl From<ObjectiveArg> for Evaluation {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Silhouette => Evaluation::Silhouette,
            ObjectiveArg::Accuracy => Evaluation::Accuracy,
            ObjectiveArg::PcaLoss => Evaluation::PcaLoss,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SizeArg {
    Min,
    Max,
}

impl From<SizeArg> for SizeDirection {
    fn from(s: SizeArg) -> Self {
        match s {
            SizeArg::Min => SizeDirection::MinimiseSize,
            SizeArg::Max => SizeDirection::MaximiseSize,
        }
    }
}

/// Search settings shared by `run` and `suite`.
#[derive(Debug, Clone, Default, Args)]
pub struct SearchArgs {
    /// Dataset directory written by `generate` [default: <output-root>/dataset]
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// JSON config file with keys mirroring the experiment config
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Bit probability of random init, or comma-separated list for segmented
    /// [default: 0.5 / 0.25,0.5,0.75]
    #[arg(long, value_delimiter = ',')]
    pub init_p: Option<Vec<f64>>,
    /// Cardinality of fixed init (required with `--init fixed`)
    #[arg(long)]
    pub init_k: Option<usize>,
    /// Population size [default: 50]
    #[arg(long)]
    pub pop: Option<usize>,
    /// Generations of `pop` steady-state steps each [default: 50]
    #[arg(long)]
    pub gens: Option<usize>,
    /// Uniform crossover probability [default: 0.9]
    #[arg(long)]
    pub crossover: Option<f64>,
    /// Per-bit mutation rate [default: 1/d]
    #[arg(long)]
    pub mutation: Option<f64>,
    /// Survive against the objectives' worst values instead of a dynamic,
    /// normalised reference point
    #[arg(long)]
    pub fixed_ref: bool,
    /// Master seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Evaluation objective (required unless set in the config file)
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveArg>,
    /// Direction of the subset-size objective (required unless set in the config file)
    #[arg(long, value_enum)]
    pub size: Option<SizeArg>,
    /// Initialisation strategy [default: random]
    #[arg(long, value_enum)]
    pub init: Option<InitKind>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Runs executed concurrently [default: 1]
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Test hook: make the named run (e.g. `accuracy-min_random`) fail
    #[arg(long, hide = true)]
    pub inject_failure: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Run directory written by `run` or `suite`
    #[arg(long)]
    pub run: PathBuf,
    /// Dataset directory [default: the one recorded by the run]
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Number of solution groups [default: 4]
    #[arg(long)]
    pub clusters: Option<usize>,
    /// Report directory [default: the run directory]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit status for an error: 2 for invalid input, 3 for missing inputs,
/// 1 otherwise. Partial suite failures exit with 4.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_)
        | Error::InvalidFlags(_)
        | Error::InvalidK { .. }
        | Error::InvalidGroups { .. } => 2,
        Error::Missing { .. } => 3,
        _ => 1,
    }
}

pub const PARTIAL_FAILURE_EXIT: u8 = 4;

pub fn run_cli<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let root = output_root(cli.output_root.as_deref());
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a, &root).map(|fingerprint| {
            println!("{fingerprint}");
            0
        }),
        Command::Run(a) => cmd_run(a, &root).map(|dir| {
            println!("{}", dir.display());
            0
        }),
        Command::Suite(a) => cmd_suite(a, &root).map(|outcome| {
            println!("{}", outcome.dir.display());
            if outcome.failures.is_empty() {
                0
            } else {
                for f in &outcome.failures {
                    eprintln!("error: run {} failed: {}", f.run, f.error);
                }
                PARTIAL_FAILURE_EXIT
            }
        }),
        Command::Analyze(a) => cmd_analyze(a).map(|outcome| {
            println!("{}", outcome.dir.display());
            0
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
