use std::collections::BTreeMap;

use super::cluster::Clustering;
use super::front::{evaluate_test_accuracy, extract_front, test_accuracy, test_seed, ParetoRecord};
use crate::dataset::{FeatureKind, SplitDataset, SyntheticDataset};
use crate::error::Result;
use crate::mlcore::ForestConfig;
use crate::moea::RunHistory;
use crate::objectives::{evaluate, EvaluationContext, ObjectiveSpec, ObjectiveVector};
use crate::subset::FeatureSubset;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSummary {
    pub label: String,
    pub n_solutions: usize,
    /// Selected-feature counts by kind, summed over the cluster's rows.
    pub kind_counts: BTreeMap<FeatureKind, usize>,
    pub mean_cardinality: f64,
    pub mean_test_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionMatrix {
    /// Record indices in dendrogram leaf order.
    pub row_records: Vec<usize>,
    pub rows: Vec<Vec<bool>>,
    pub row_labels: Vec<String>,
    pub kinds: Vec<FeatureKind>,
    pub clusters: Vec<ClusterSummary>,
}

/// Selection counts by feature kind.
pub fn kind_counts(subset: &FeatureSubset, kinds: &[FeatureKind]) -> BTreeMap<FeatureKind, usize> {
    let mut counts: BTreeMap<FeatureKind, usize> = FeatureKind::ALL.iter().map(|&k| (k, 0)).collect();
    for i in subset.indices() {
        *counts.entry(kinds[i]).or_default() += 1;
    }
    counts
}

pub fn composition_report(records: &[ParetoRecord], clustering: &Clustering, kinds: &[FeatureKind]) -> CompositionMatrix {
    let row_records = clustering.record_order(records);
    let rows = row_records.iter().map(|&i| records[i].subset.bits().to_vec()).collect();
    let row_labels: Vec<String> = row_records.iter().map(|&i| clustering.labels[i].clone()).collect();

    let mut labels: Vec<String> = clustering.labels.clone();
    labels.sort_by_key(|l| l[1..].parse::<usize>().unwrap_or(usize::MAX));
    labels.dedup();
    let clusters = labels
        .into_iter()
        .map(|label| {
            let members: Vec<&ParetoRecord> = records
                .iter()
                .zip(&clustering.labels)
                .filter(|(_, l)| **l == label)
                .map(|(r, _)| r)
                .collect();
            let mut counts: BTreeMap<FeatureKind, usize> = FeatureKind::ALL.iter().map(|&k| (k, 0)).collect();
            for r in &members {
                for (k, c) in kind_counts(&r.subset, kinds) {
                    *counts.entry(k).or_default() += c;
                }
            }
            let n = members.len() as f64;
            let accs: Option<Vec<f64>> = members.iter().map(|r| r.test_accuracy).collect();
            ClusterSummary {
                n_solutions: members.len(),
                kind_counts: counts,
                mean_cardinality: members.iter().map(|r| r.subset.cardinality() as f64).sum::<f64>() / n,
                mean_test_accuracy: accs.map(|a| a.iter().sum::<f64>() / n),
                label,
            }
        })
        .collect();
    CompositionMatrix {
        row_records,
        rows,
        row_labels,
        kinds: kinds.to_vec(),
        clusters,
    }
}

/// Fraction of informative features that are selected directly or appear
/// among the lineage parents of a selected feature.
pub fn lineage_coverage(subset: &FeatureSubset, dataset: &SyntheticDataset) -> f64 {
    let informative = dataset.indices_of(FeatureKind::Informative);
    if informative.is_empty() {
        return 0.0;
    }
    let mut covered = vec![false; dataset.n_features()];
    for j in subset.indices() {
        covered[j] = true;
        if let Some(l) = dataset.lineage_of(j) {
            for &p in &l.parents {
                covered[p] = true;
            }
        }
    }
    informative.iter().filter(|&&i| covered[i]).count() as f64 / informative.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominationStatus {
    Dominated,
    NonDominated,
}

impl DominationStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DominationStatus::Dominated => "dominated",
            DominationStatus::NonDominated => "non-dominated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthReport {
    pub naive_subset: FeatureSubset,
    pub naive_objectives: ObjectiveVector,
    pub naive_test_accuracy: f64,
    pub status: DominationStatus,
    /// Whether each record dominates the naive subset.
    pub dominates_naive: Vec<bool>,
    /// `test_accuracy(record) - naive_test_accuracy` per record.
    pub accuracy_deltas: Vec<f64>,
}

/// The informative block as a subset.
pub fn naive_subset(kinds: &[FeatureKind]) -> FeatureSubset {
    FeatureSubset::from_indices(
        kinds.len(),
        kinds
            .iter()
            .enumerate()
            .filter(|(_, &k)| k == FeatureKind::Informative)
            .map(|(i, _)| i),
    )
}

/// Scores the naive ground truth under `spec` and against each record.
/// Records must already carry test accuracies.
pub fn compare_to_ground_truth(
    records: &[ParetoRecord],
    split: &SplitDataset,
    spec: ObjectiveSpec,
    ctx: &EvaluationContext,
    master_seed: u64,
) -> Result<GroundTruthReport> {
    let naive = naive_subset(&split.train.kinds);
    let naive_objectives = evaluate(&naive, spec, ctx)?;
    let naive_test_accuracy = test_accuracy(&naive, split, &ctx.params.forest, test_seed(master_seed, &naive))?;
    let dominates_naive: Vec<bool> = records.iter().map(|r| r.objectives().dominates(&naive_objectives)).collect();
    let accuracy_deltas = records
        .iter()
        .map(|r| r.test_accuracy.map_or(f64::NAN, |a| a - naive_test_accuracy))
        .collect();
    let status = if dominates_naive.iter().any(|&d| d) {
        DominationStatus::Dominated
    } else {
        DominationStatus::NonDominated
    };
    Ok(GroundTruthReport {
        naive_subset: naive,
        naive_objectives,
        naive_test_accuracy,
        status,
        dominates_naive,
        accuracy_deltas,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub formulation: String,
    pub init: String,
    pub subset: FeatureSubset,
    pub subset_size: usize,
    pub subset_fraction: f64,
    pub f1: f64,
    pub f2: f64,
    pub test_accuracy: f64,
}

/// Front members of every run with their held-out accuracy, one flat table.
pub fn cross_formulation_table(
    runs: &[RunHistory],
    split: &SplitDataset,
    forest: &ForestConfig,
    master_seed: u64,
) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::new();
    for run in runs {
        let mut front = extract_front(run);
        evaluate_test_accuracy(&mut front, split, forest, master_seed)?;
        for r in front {
            rows.push(ComparisonRow {
                formulation: run.spec.id(),
                init: run.config.init.name().to_string(),
                subset_size: r.subset.cardinality(),
                subset_fraction: r.subset_fraction,
                f1: r.f1,
                f2: r.f2,
                test_accuracy: r.test_accuracy.expect("evaluated above"),
                subset: r.subset,
            });
        }
    }
    Ok(rows)
}
