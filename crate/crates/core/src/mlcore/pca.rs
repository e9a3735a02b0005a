use nalgebra::linalg::SVD;
use ndarray::{Array1, Array2, ArrayView2};

use super::linalg::{centered, column_means};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    /// `d × k`, columns are the principal axes.
    pub components: Array2<f64>,
    /// Variance along each axis (`σ² / (n-1)`), non-increasing.
    pub explained_variance: Vec<f64>,
    /// Sum of the variances of all `min(n, d)` axes.
    pub total_variance: f64,
    pub mean: Array1<f64>,
}

impl PcaModel {
    pub fn n_components(&self) -> usize {
        self.components.ncols()
    }

    pub fn explained_variance_ratio(&self) -> Vec<f64> {
        self.explained_variance
            .iter()
            .map(|v| if self.total_variance > 0.0 { v / self.total_variance } else { 0.0 })
            .collect()
    }
}

/// Top-`k` principal axes from the SVD of the column-centred matrix.
///
/// Each axis is signed so that its largest-magnitude entry is positive.
pub fn pca_fit(x: ArrayView2<f64>, k: usize) -> Result<PcaModel> {
    let (n, d) = x.dim();
    if k == 0 || k > n.min(d) {
        return Err(Error::InvalidK { k, n: n.min(d) });
    }
    let mean = column_means(x);
    let svd = SVD::new(centered(x, &mean), false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let s = svd.singular_values;

    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));

    let dof = n.saturating_sub(1).max(1) as f64;
    let total_variance = s.iter().map(|v| v * v / dof).sum();
    let mut components = Array2::zeros((d, k));
    let mut explained_variance = Vec::with_capacity(k);
    for (c, &r) in order.iter().take(k).enumerate() {
        let axis: Vec<f64> = (0..d).map(|j| v_t[(r, j)]).collect();
        let pivot = axis
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (j, v)| if v.abs() > best.1 { (j, v.abs()) } else { best })
            .0;
        let sign = if axis[pivot] < 0.0 { -1.0 } else { 1.0 };
        for (j, v) in axis.into_iter().enumerate() {
            components[[j, c]] = sign * v;
        }
        explained_variance.push(s[r] * s[r] / dof);
    }
    Ok(PcaModel {
        components,
        explained_variance,
        total_variance,
        mean,
    })
}

/// `Z = (X - mean) · components`.
pub fn pca_project(model: &PcaModel, x: ArrayView2<f64>) -> Result<Array2<f64>> {
    if x.ncols() != model.mean.len() {
        return Err(Error::ShapeMismatch(format!(
            "PCA fitted on {} columns, got {}",
            model.mean.len(),
            x.ncols()
        )));
    }
    let centred = &x - &model.mean;
    Ok(centred.dot(&model.components))
}
