use nalgebra::linalg::SVD;
use nalgebra::DMatrix;
use ndarray::{Array1, Array2, ArrayView2};

use super::linalg::{centered, column_means, from_dmatrix};
use crate::error::{Error, Result};

/// Multivariate linear model `Ẑ = X·W + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    /// `m × k` coefficient matrix.
    pub coefficients: Array2<f64>,
    pub intercept: Array1<f64>,
}

/// Minimum-norm least squares with intercept.
///
/// Both sides are centred and the coefficients come from the pseudo-inverse
/// of the centred design, so exactly collinear columns are fine.
pub fn ols_fit(x: ArrayView2<f64>, z: ArrayView2<f64>) -> Result<LinearModel> {
    let (n, m) = x.dim();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if z.nrows() != n {
        return Err(Error::ShapeMismatch(format!(
            "design has {n} rows, target has {}",
            z.nrows()
        )));
    }
    let k = z.ncols();
    let x_mean = column_means(x);
    let z_mean = column_means(z);
    let xc = centered(x, &x_mean);
    let zc = centered(z, &z_mean);

    let coefficients = if m == 0 {
        DMatrix::zeros(0, k)
    } else {
        let svd = SVD::new(xc, true, true);
        let u = svd.u.expect("requested U");
        let v_t = svd.v_t.expect("requested V^T");
        let s = &svd.singular_values;
        let s_max = s.iter().copied().fold(0.0, f64::max);
        let cutoff = s_max * f64::EPSILON * n.max(m) as f64;
        // W = V Σ⁺ Uᵀ Zc
        let mut utz = u.transpose() * zc;
        for (r, &sv) in s.iter().enumerate() {
            let scale = if sv > cutoff { 1.0 / sv } else { 0.0 };
            utz.row_mut(r).scale_mut(scale);
        }
        v_t.transpose() * utz
    };
    let coefficients = from_dmatrix(&coefficients);
    let intercept = &z_mean - &x_mean.dot(&coefficients);
    Ok(LinearModel {
        coefficients,
        intercept,
    })
}

pub fn ols_predict(model: &LinearModel, x: ArrayView2<f64>) -> Result<Array2<f64>> {
    if x.ncols() != model.coefficients.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "model has {} inputs, got {}",
            model.coefficients.nrows(),
            x.ncols()
        )));
    }
    Ok(x.dot(&model.coefficients) + &model.intercept)
}
