//! Multiobjective unsupervised feature selection.
//!
//! The crate generates a synthetic classification dataset whose features carry
//! a known taxonomy and lineage, searches binary feature subsets with a
//! steady-state hypervolume-based evolutionary algorithm (SMS-EMOA) under six
//! objective formulations, and analyses the resulting Pareto fronts.
//!
//! Module map:
//!
//! * [`dataset`] generation, splitting, standardisation and persistence
//! * [`mlcore`] k-means, silhouette, PCA, least squares and random forests
//! * [`objectives`] the evaluation objectives and the size regulariser
//! * [`moea`] SMS-EMOA, initialisation strategies and run histories
//! * [`analysis`] front extraction, clustering and composition reports
//! * [`cli`] the `mofs` command-line orchestrator

pub mod analysis;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod mlcore;
pub mod moea;
pub mod objectives;
pub mod seed;
pub mod subset;

pub use error::{Error, Result};
pub use subset::FeatureSubset;
