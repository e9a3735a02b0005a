use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;

use super::generate::SyntheticDataset;
use crate::error::{Error, Result};
use crate::seed::derived_rng;

pub const DEFAULT_TEST_FRACTION: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitDataset {
    pub train: SyntheticDataset,
    pub test: SyntheticDataset,
    /// Ascending row indices into the full dataset.
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub split_seed: u64,
    pub test_fraction: f64,
}

impl SplitDataset {
    /// Rebuilds the train/test views from stored indices.
    pub fn from_indices(
        dataset: &SyntheticDataset,
        train_indices: Vec<usize>,
        test_indices: Vec<usize>,
        split_seed: u64,
        test_fraction: f64,
    ) -> SplitDataset {
        SplitDataset {
            train: dataset.select_rows(&train_indices),
            test: dataset.select_rows(&test_indices),
            train_indices,
            test_indices,
            split_seed,
            test_fraction,
        }
    }
}

/// Stratified split: each class sends `round(fraction · n_c)` of its samples
/// to the test side.
pub fn split(dataset: &SyntheticDataset, test_fraction: f64, seed: u64) -> Result<SplitDataset> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "test_fraction = {test_fraction} outside (0, 1)"
        )));
    }
    let n_classes = dataset.y.iter().copied().max().map_or(0, |m| m + 1);
    let mut rng = derived_rng(seed, &["split".into()]);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in 0..n_classes {
        let mut members: Vec<usize> = (0..dataset.n_samples())
            .filter(|&i| dataset.y[i] == class)
            .collect();
        if members.is_empty() {
            continue;
        }
        members.shuffle(&mut rng);
        let n_test = (test_fraction * members.len() as f64).round() as usize;
        if n_test == 0 || n_test == members.len() {
            return Err(Error::DegenerateSplit(format!(
                "class {class} has {} samples; {n_test} would go to test",
                members.len()
            )));
        }
        test.extend_from_slice(&members[..n_test]);
        train.extend_from_slice(&members[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitDataset::from_indices(dataset, train, test, seed, test_fraction))
}

/// Per-feature z-score parameters estimated on training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Array1<f64>,
    /// Population standard deviation; 0 marks a constant feature.
    pub std: Array1<f64>,
}

impl Standardizer {
    pub fn fit(train: ArrayView2<f64>) -> Standardizer {
        let n = train.nrows().max(1) as f64;
        let mean = train
            .mean_axis(Axis(0))
            .unwrap_or_else(|| Array1::zeros(train.ncols()));
        let mut std = Array1::zeros(train.ncols());
        for (j, col) in train.columns().into_iter().enumerate() {
            let var = col.iter().map(|v| (v - mean[j]).powi(2)).sum::<f64>() / n;
            let s = var.sqrt();
            // relative guard: rounding leaves tiny spread on constant columns
            std[j] = if s > 1e-12 * (1.0 + mean[j].abs()) { s } else { 0.0 };
        }
        Standardizer { mean, std }
    }

    pub fn transform(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let mut out = x.to_owned();
        for (j, mut col) in out.columns_mut().into_iter().enumerate() {
            let (m, s) = (self.mean[j], self.std[j]);
            if s == 0.0 {
                col.fill(0.0);
            } else {
                col.mapv_inplace(|v| (v - m) / s);
            }
        }
        out
    }
}

/// Z-scores `apply_to` with statistics from `train` only.
pub fn standardize(train: ArrayView2<f64>, apply_to: ArrayView2<f64>) -> (Array2<f64>, Standardizer) {
    let scaler = Standardizer::fit(train);
    (scaler.transform(apply_to), scaler)
}
