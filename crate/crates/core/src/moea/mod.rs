//! Steady-state SMS-EMOA over binary feature masks.

mod config;
mod export;
mod hypervolume;
mod init;
mod run;
mod select;
mod sort;

pub use config::{InitStrategy, MoeaConfig, ReferencePointMode};
pub use export::{load_history, load_manifest, save_history, RunManifest, HISTORY_FILE, HV_TRACE_FILE, MANIFEST_FILE};
pub use hypervolume::{hv_contribution_2d, hypervolume_2d};
pub use init::{init_binary_random, init_fixed_cardinality, init_segmented, initialise, repair, segment_sizes};
pub use run::{run, RunHistory, Snapshot};
pub use select::{
    front_contributions, make_offspring, rank_and_contribution, survival_select, survival_victim, vary,
    Individual, Variation,
};
pub use sort::{front_ranks, non_dominated_sort};
