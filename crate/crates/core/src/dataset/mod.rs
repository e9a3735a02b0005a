//! Synthetic dataset with a known feature taxonomy: generation, stratified
//! splitting, standardisation and persistence.

mod generate;
mod io;
mod split;

pub use generate::{
    feature_name, generate, make_gaussian_noise, make_informative, make_linear_redundant,
    make_nonlinear_redundant, make_structured_noise, make_sweep, nonlinear_plan, structured_noise_groups, FeatureKind,
    GeneratorConfig, InformativeBlock, Lineage, Mixing, NonLinearKind, StructuredBlock,
    SyntheticDataset, Transform,
};
pub use io::{fmt_f64, load, load_metadata, save, Metadata, DATA_FILE, METADATA_FILE};
pub use split::{split, standardize, SplitDataset, Standardizer, DEFAULT_TEST_FRACTION};
