//! Conversions between the ndarray data layout and nalgebra decompositions.

use nalgebra::DMatrix;
use ndarray::{Array1, Array2, ArrayView2, Axis};

pub(crate) fn from_dmatrix(m: &DMatrix<f64>) -> Array2<f64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

/// Column means, or zeros for an empty matrix.
pub(crate) fn column_means(x: ArrayView2<f64>) -> Array1<f64> {
    x.mean_axis(Axis(0))
        .unwrap_or_else(|| Array1::zeros(x.ncols()))
}

pub(crate) fn centered(x: ArrayView2<f64>, mean: &Array1<f64>) -> DMatrix<f64> {
    let (n, m) = x.dim();
    DMatrix::from_fn(n, m, |i, j| x[[i, j]] - mean[j])
}
