//! Pareto-front extraction, held-out evaluation, solution clustering and
//! composition reports.

mod cluster;
mod front;
mod report;
mod write;

pub use cluster::{average_linkage, cluster_solutions, dendrogram_leaf_order, Clustering, Merge};
pub use front::{evaluate_test_accuracy, extract_front, test_accuracy, test_seed, ParetoRecord};
pub use report::{
    composition_report, compare_to_ground_truth, cross_formulation_table, kind_counts, lineage_coverage,
    naive_subset, ClusterSummary, ComparisonRow, CompositionMatrix, DominationStatus, GroundTruthReport,
};
pub use write::{
    write_clusters, write_comparison, write_composition, write_front, write_ground_truth, write_linkage,
    CLUSTERS_FILE, COMPARISON_FILE, COMPOSITION_FILE, FRONT_FILE, GROUND_TRUTH_FILE, LINKAGE_FILE,
};
