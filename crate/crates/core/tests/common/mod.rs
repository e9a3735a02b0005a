//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::sync::OnceLock;

use mofs::dataset::{generate, split, GeneratorConfig, SplitDataset, SyntheticDataset};
use mofs::objectives::ObjectiveVector;

/// Default dataset and its split, both from master seed 0.
pub fn default_data() -> &'static (SyntheticDataset, SplitDataset) {
    static DATA: OnceLock<(SyntheticDataset, SplitDataset)> = OnceLock::new();
    DATA.get_or_init(|| {
        let ds = generate(&GeneratorConfig::default()).unwrap();
        let sp = split(&ds, 0.3, ds.config.master_seed).unwrap();
        (ds, sp)
    })
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

/// Solves `A x = b` for several right-hand sides by Gauss-Jordan elimination
/// with partial pivoting. `a` is row-major `n × n`, `b` is `n × k`.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col];
        assert!(p.abs() > 1e-14, "singular system");
        for j in 0..n {
            a[col][j] /= p;
        }
        for v in b[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != 0.0 {
                    for j in 0..n {
                        a[row][j] -= f * a[col][j];
                    }
                    for j in 0..b[row].len() {
                        b[row][j] -= f * b[col][j];
                    }
                }
            }
        }
    }
    b
}

/// Least squares with intercept via the normal equations. Returns
/// `(coefficients m × k, intercept k)`.
pub fn normal_equations(x: &[Vec<f64>], z: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = x[0].len();
    let k = z[0].len();
    let design: Vec<Vec<f64>> = x
        .iter()
        .map(|r| std::iter::once(1.0).chain(r.iter().copied()).collect())
        .collect();
    let p = m + 1;
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xtz = vec![vec![0.0; k]; p];
    for (row, target) in design.iter().zip(z) {
        for i in 0..p {
            for j in 0..p {
                xtx[i][j] += row[i] * row[j];
            }
            for j in 0..k {
                xtz[i][j] += row[i] * target[j];
            }
        }
    }
    let beta = solve(xtx, xtz);
    (beta[1..].to_vec(), beta[0].clone())
}

/// Coefficient of determination of regressing `y` on the columns `xs`.
pub fn r_squared(xs: &[Vec<f64>], y: &[f64]) -> f64 {
    let rows: Vec<Vec<f64>> = (0..y.len()).map(|i| xs.iter().map(|c| c[i]).collect()).collect();
    let z: Vec<Vec<f64>> = y.iter().map(|&v| vec![v]).collect();
    let (coef, intercept) = normal_equations(&rows, &z);
    let my = mean(y);
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (row, &v) in rows.iter().zip(y) {
        let pred = intercept[0] + row.iter().zip(&coef).map(|(a, c)| a * c[0]).sum::<f64>();
        ss_res += (v - pred).powi(2);
        ss_tot += (v - my).powi(2);
    }
    1.0 - ss_res / ss_tot
}

fn choose2(n: usize) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index between two labelings.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut table = vec![vec![0usize; kb]; ka];
    for (&i, &j) in a.iter().zip(b) {
        table[i][j] += 1;
    }
    let index: f64 = table.iter().flatten().map(|&c| choose2(c)).sum();
    let rows: f64 = table.iter().map(|r| choose2(r.iter().sum())).sum();
    let cols: f64 = (0..kb).map(|j| choose2(table.iter().map(|r| r[j]).sum())).sum();
    let expected = rows * cols / choose2(a.len());
    let max = 0.5 * (rows + cols);
    (index - expected) / (max - expected)
}

/// Mutual information of two variables after equal-width binning.
pub fn binned_mutual_information(x: &[f64], y: &[f64], bins: usize) -> f64 {
    let bin = |v: &[f64]| -> Vec<usize> {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        v.iter()
            .map(|&t| (((t - lo) / (hi - lo) * bins as f64) as usize).min(bins - 1))
            .collect()
    };
    let (bx, by) = (bin(x), bin(y));
    let n = x.len() as f64;
    let mut joint = vec![vec![0.0; bins]; bins];
    for (&i, &j) in bx.iter().zip(&by) {
        joint[i][j] += 1.0 / n;
    }
    let px: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let py: Vec<f64> = (0..bins).map(|j| joint.iter().map(|r| r[j]).sum()).collect();
    let mut mi = 0.0;
    for i in 0..bins {
        for j in 0..bins {
            if joint[i][j] > 0.0 {
                mi += joint[i][j] * (joint[i][j] / (px[i] * py[j])).ln();
            }
        }
    }
    mi
}

/// Number of grid cells with centre in `[a, b)` along an axis of `g` cells on
/// `[lo, hi)`.
fn cells_between(a: f64, b: f64, lo: f64, hi: f64, g: usize) -> usize {
    let idx = |v: f64| (((v - lo) / (hi - lo)) * g as f64 - 0.5).ceil().clamp(0.0, g as f64) as usize;
    idx(b).saturating_sub(idx(a))
}

/// Dominated area and per-point exclusive areas measured on a `g × g` grid
/// over `[lo, reference]²`, column by column.
pub fn grid_hypervolume(points: &[ObjectiveVector], reference: ObjectiveVector, lo: f64, g: usize) -> (f64, Vec<f64>) {
    let cell = (reference.f1 - lo) * (reference.f2 - lo) / (g * g) as f64;
    let mut total = 0usize;
    let mut exclusive = vec![0usize; points.len()];
    for c in 0..g {
        let xc = lo + (c as f64 + 0.5) * (reference.f1 - lo) / g as f64;
        let mut col: Vec<(f64, usize)> = points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.f1 <= xc)
            .map(|(i, p)| (p.f2, i))
            .collect();
        if col.is_empty() {
            continue;
        }
        col.sort_by(|a, b| a.0.total_cmp(&b.0));
        let lowest = col[0].0.min(reference.f2);
        total += cells_between(lowest, reference.f2, lo, reference.f2, g);
        let second = col.get(1).map_or(reference.f2, |s| s.0.min(reference.f2));
        exclusive[col[0].1] += cells_between(lowest, second, lo, reference.f2, g);
    }
    (
        total as f64 * cell,
        exclusive.into_iter().map(|e| e as f64 * cell).collect(),
    )
}

/// Fronts by repeated brute-force filtering, each sorted by `(f2, f1, index)`.
pub fn brute_fronts(points: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let dominates = |p: &ObjectiveVector, q: &ObjectiveVector| {
        p.f1 <= q.f1 && p.f2 <= q.f2 && (p.f1 < q.f1 || p.f2 < q.f2)
    };
    let mut left: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let mut front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dominates(&points[j], &points[i])))
            .collect();
        front.sort_by(|&a, &b| {
            points[a]
                .f2
                .total_cmp(&points[b].f2)
                .then(points[a].f1.total_cmp(&points[b].f1))
                .then(a.cmp(&b))
        });
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}
