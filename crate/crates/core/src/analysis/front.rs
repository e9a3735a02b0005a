use rayon::prelude::*;

use crate::dataset::{standardize, SplitDataset};
use crate::error::{Error, Result};
use crate::mlcore::{accuracy, forest_fit, forest_predict, ForestConfig};
use crate::moea::RunHistory;
use crate::objectives::{filter_columns, ObjectiveVector};
use crate::seed::derive_seed;
use crate::subset::FeatureSubset;

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoRecord {
    pub subset: FeatureSubset,
    pub f1: f64,
    pub f2: f64,
    pub subset_fraction: f64,
    pub test_accuracy: Option<f64>,
    pub cluster_id: Option<String>,
}

impl ParetoRecord {
    pub fn new(subset: FeatureSubset, objectives: ObjectiveVector) -> Self {
        let subset_fraction = subset.cardinality() as f64 / subset.dimension() as f64;
        ParetoRecord {
            subset,
            f1: objectives.f1,
            f2: objectives.f2,
            subset_fraction,
            test_accuracy: None,
            cluster_id: None,
        }
    }

    pub fn objectives(&self) -> ObjectiveVector {
        ObjectiveVector::new(self.f1, self.f2)
    }
}

/// Non-dominated members of the final snapshot, one per bitmask, ordered by
/// `f2`, then `f1`, then bitmask.
pub fn extract_front(history: &RunHistory) -> Vec<ParetoRecord> {
    let members = &history.final_snapshot().members;
    let mut unique: Vec<&crate::moea::Individual> = Vec::new();
    for m in members {
        if !unique.iter().any(|u| u.subset == m.subset) {
            unique.push(m);
        }
    }
    let mut front: Vec<ParetoRecord> = unique
        .iter()
        .filter(|m| !unique.iter().any(|o| o.objectives.dominates(&m.objectives)))
        .map(|m| ParetoRecord::new(m.subset.clone(), m.objectives))
        .collect();
    front.sort_by(|a, b| {
        a.f2.total_cmp(&b.f2)
            .then(a.f1.total_cmp(&b.f1))
            .then_with(|| a.subset.cmp(&b.subset))
    });
    front
}

/// Seed for the held-out evaluation of one subset.
pub fn test_seed(master_seed: u64, subset: &FeatureSubset) -> u64 {
    derive_seed(master_seed, &["test".into(), subset.to_bytes().as_slice().into()])
}

/// Forest fit on the training rows of the selected columns, scored on the
/// test rows. Both sides are standardised with training statistics.
pub fn test_accuracy(subset: &FeatureSubset, split: &SplitDataset, forest: &ForestConfig, seed: u64) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let train = filter_columns(split.train.x.view(), subset)?;
    let test = filter_columns(split.test.x.view(), subset)?;
    let (train_z, scaler) = standardize(train.view(), train.view());
    let test_z = scaler.transform(test.view());
    let model = forest_fit(train_z.view(), &split.train.y, forest, seed)?;
    let predicted = forest_predict(&model, test_z.view())?;
    Ok(accuracy(&predicted, &split.test.y))
}

/// Fills `test_accuracy` on every record, seeding each from its bitmask.
pub fn evaluate_test_accuracy(
    records: &mut [ParetoRecord],
    split: &SplitDataset,
    forest: &ForestConfig,
    master_seed: u64,
) -> Result<()> {
    let scores: Vec<Result<f64>> = records
        .par_iter()
        .map(|r| test_accuracy(&r.subset, split, forest, test_seed(master_seed, &r.subset)))
        .collect();
    for (r, s) in records.iter_mut().zip(scores) {
        r.test_accuracy = Some(s?);
    }
    Ok(())
}
