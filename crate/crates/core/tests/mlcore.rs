mod common;

use common::normal_equations;
use mofs::mlcore::{
    forest_fit, forest_oob_accuracy, forest_predict, kmeans_fit, ols_fit, ols_predict, pca_fit, pca_project,
    silhouette, ForestConfig,
};
use mofs::seed::rng_from_seed;
use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{array, Array2};
use rand::Rng;
use rand_distr::StandardNormal;

fn random_matrix(n: usize, m: usize, seed: u64) -> Array2<f64> {
    let mut rng = rng_from_seed(seed);
    Array2::from_shape_fn((n, m), |_| rng.sample(StandardNormal))
}

fn covariance_eigenvalues(x: &Array2<f64>) -> Vec<f64> {
    let (n, d) = x.dim();
    let mean = x.mean_axis(ndarray::Axis(0)).unwrap();
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for row in x.rows() {
        for i in 0..d {
            for j in 0..d {
                cov[(i, j)] += (row[i] - mean[i]) * (row[j] - mean[j]) / (n - 1) as f64;
            }
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(cov).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

#[test]
fn pca_variances_match_covariance_eigenvalues() {
    for seed in 0..20 {
        let x = random_matrix(20, 6, seed);
        let model = pca_fit(x.view(), 6).unwrap();
        let oracle = covariance_eigenvalues(&x);
        for (got, want) in model.explained_variance.iter().zip(&oracle) {
            assert!((got - want).abs() <= 1e-6, "seed {seed}: {got} vs {want}");
        }
        for w in model.explained_variance.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let gram = model.components.t().dot(&model.components);
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((gram[[i, j]] - want).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn pca_full_rank_reconstruction_and_sign_convention() {
    let x = random_matrix(15, 4, 3);
    let model = pca_fit(x.view(), 4).unwrap();
    let z = pca_project(&model, x.view()).unwrap();
    let back = z.dot(&model.components.t()) + &model.mean;
    for (a, b) in back.iter().zip(x.iter()) {
        assert!((a - b).abs() < 1e-8);
    }
    for c in model.components.columns() {
        let top = c.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap();
        assert!(top > 0.0);
    }
    let centred_ss: f64 = (&x - &model.mean).iter().map(|v| v * v).sum();
    let z_ss: f64 = z.iter().map(|v| v * v).sum();
    assert!((centred_ss - z_ss).abs() < 1e-8 * centred_ss);
}

#[test]
fn pca_rank_one_data() {
    let x = array![[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]];
    let model = pca_fit(x.view(), 1).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((model.components[[0, 0]] - h).abs() < 1e-12);
    assert!((model.components[[1, 0]] - h).abs() < 1e-12);
    assert!((model.explained_variance_ratio()[0] - 1.0).abs() < 1e-12);
    assert!(pca_fit(x.view(), 3).is_err());
}

#[test]
fn ols_matches_normal_equations() {
    for seed in 0..10 {
        let x = random_matrix(8, 3, 100 + seed);
        let z = random_matrix(8, 2, 200 + seed);
        let model = ols_fit(x.view(), z.view()).unwrap();
        let rows = |a: &Array2<f64>| a.rows().into_iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        let (coef, intercept) = normal_equations(&rows(&x), &rows(&z));
        for i in 0..3 {
            for j in 0..2 {
                assert!((model.coefficients[[i, j]] - coef[i][j]).abs() < 1e-6);
            }
        }
        for j in 0..2 {
            assert!((model.intercept[j] - intercept[j]).abs() < 1e-6);
        }
        // residuals are orthogonal to the centred design
        let resid = &z - &ols_predict(&model, x.view()).unwrap();
        let xc = &x - &x.mean_axis(ndarray::Axis(0)).unwrap();
        let cross = xc.t().dot(&resid);
        assert!(cross.iter().all(|v| v.abs() < 1e-6));
    }
}

#[test]
fn ols_nested_models_never_fit_worse() {
    let x = random_matrix(30, 6, 7);
    let z = random_matrix(30, 2, 8);
    let mse = |m: usize| {
        let xs = x.slice(ndarray::s![.., ..m]).to_owned();
        let model = ols_fit(xs.view(), z.view()).unwrap();
        let r = &z - &ols_predict(&model, xs.view()).unwrap();
        r.iter().map(|v| v * v).sum::<f64>()
    };
    for m in 1..6 {
        assert!(mse(m + 1) <= mse(m) + 1e-12);
    }
}

#[test]
fn ols_handles_collinear_columns() {
    let base = random_matrix(10, 2, 5);
    let mut x = Array2::zeros((10, 3));
    x.slice_mut(ndarray::s![.., ..2]).assign(&base);
    x.column_mut(2).assign(&base.column(0));
    let z = base.dot(&array![[1.0], [-2.0]]) + 0.5;
    let model = ols_fit(x.view(), z.view()).unwrap();
    let pred = ols_predict(&model, x.view()).unwrap();
    for (a, b) in pred.iter().zip(z.iter()) {
        assert!((a - b).abs() < 1e-8);
    }
    // minimum norm splits the weight evenly across the duplicated column
    assert!((model.coefficients[[0, 0]] - model.coefficients[[2, 0]]).abs() < 1e-8);
}

#[test]
fn kmeans_inertia_trace_is_non_increasing() {
    for seed in 0..30 {
        let x = random_matrix(40, 3, 300 + seed);
        let model = kmeans_fit(x.view(), 2 + (seed as usize % 4), seed).unwrap();
        for w in model.inertia_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9 * w[0].max(1.0), "seed {seed}: {:?}", model.inertia_trace);
        }
    }
}

#[test]
fn kmeans_small_examples() {
    let x = array![[0.0], [1.0], [10.0], [11.0]];
    let m = kmeans_fit(x.view(), 2, 0).unwrap();
    let mut c: Vec<f64> = m.centroids.iter().copied().collect();
    c.sort_by(f64::total_cmp);
    assert_eq!(c, vec![0.5, 10.5]);
    assert!((m.inertia - 1.0).abs() < 1e-12);
    let all = kmeans_fit(x.view(), 4, 0).unwrap();
    assert!(all.inertia.abs() < 1e-12);
}

#[test]
fn silhouette_hand_example_and_label_permutation() {
    let x = array![[0.0], [1.0], [2.0], [3.0]];
    let s = silhouette(x.view(), &[0, 0, 1, 1]).unwrap();
    assert!((s - 7.0 / 15.0).abs() < 1e-12);
    let swapped = silhouette(x.view(), &[1, 1, 0, 0]).unwrap();
    assert!((s - swapped).abs() < 1e-15);
    assert!(silhouette(x.view(), &[0, 0, 0, 0]).is_err());
    let y = random_matrix(30, 2, 1);
    let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
    let r = silhouette(y.view(), &labels).unwrap();
    assert!((-1.0..=1.0).contains(&r));
}

#[test]
fn forest_separates_blobs_and_is_deterministic() {
    let mut rng = rng_from_seed(4);
    let mut x = Array2::zeros((200, 2));
    let mut y = vec![0; 200];
    for i in 0..200 {
        let c = i % 2;
        y[i] = c;
        let centre = if c == 0 { -3.0 } else { 3.0 };
        for j in 0..2 {
            x[[i, j]] = centre + rng.sample::<f64, _>(StandardNormal);
        }
    }
    let cfg = ForestConfig::default();
    let a = forest_fit(x.view(), &y, &cfg, 11).unwrap();
    let b = forest_fit(x.view(), &y, &cfg, 11).unwrap();
    assert!(forest_oob_accuracy(&a, &y).unwrap() >= 0.95);
    assert_eq!(a, b);
    assert_eq!(forest_predict(&a, x.view()).unwrap(), forest_predict(&b, x.view()).unwrap());
    assert!(forest_fit(x.view(), &vec![1; 200], &cfg, 0).is_err());
}
