use ndarray::{Array2, ArrayView2};
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from_seed, Rng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iter: usize,
    /// Convergence threshold on the largest centroid displacement.
    pub tol: f64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        KMeansOptions {
            restarts: 5,
            max_iter: 100,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansModel {
    pub k: usize,
    /// `k × m` centroid matrix.
    pub centroids: Array2<f64>,
    pub assignments: Vec<usize>,
    pub inertia: f64,
    /// Inertia after each assignment step of the winning restart.
    pub inertia_trace: Vec<f64>,
    pub n_iter: usize,
}

/// Lloyd's algorithm with k-means++ seeding, best of several restarts.
pub fn kmeans_fit(x: ArrayView2<f64>, k: usize, seed: u64) -> Result<KMeansModel> {
    kmeans_fit_with(x, k, seed, KMeansOptions::default())
}

pub fn kmeans_fit_with(
    x: ArrayView2<f64>,
    k: usize,
    seed: u64,
    opts: KMeansOptions,
) -> Result<KMeansModel> {
    let (n, m) = x.dim();
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    let data = Rows::new(x);
    let mut best: Option<KMeansModel> = None;
    for restart in 0..opts.restarts.max(1) {
        let mut rng = rng_from_seed(derive_seed(seed, &["kmeans".into(), restart.into()]));
        let model = lloyd(&data, k, &opts, &mut rng);
        // strict comparison keeps the earliest restart on ties
        if best.as_ref().is_none_or(|b| model.inertia < b.inertia) {
            best = Some(model);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Contiguous row-major copy of the input.
struct Rows {
    n: usize,
    m: usize,
    data: Vec<f64>,
}

impl Rows {
    fn new(x: ArrayView2<f64>) -> Self {
        let (n, m) = x.dim();
        Rows {
            n,
            m,
            data: x.iter().copied().collect(),
        }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.m..(i + 1) * self.m]
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn plus_plus_init(data: &Rows, k: usize, rng: &mut Rng) -> Vec<f64> {
    let (n, m) = (data.n, data.m);
    let mut centroids = Vec::with_capacity(k * m);
    let first = rng.random_range(0..n);
    centroids.extend_from_slice(data.row(first));
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(data.row(i), data.row(first))).collect();
    for _ in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if acc > target && w > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centroids.extend_from_slice(data.row(pick));
        for (i, slot) in d2.iter_mut().enumerate() {
            let d = sq_dist(data.row(i), data.row(pick));
            if d < *slot {
                *slot = d;
            }
        }
    }
    centroids
}

/// Assigns every row to its nearest centroid (lowest index on ties) and
/// returns per-row squared distances.
fn assign(data: &Rows, centroids: &[f64], k: usize, labels: &mut [usize], dist: &mut [f64]) {
    let m = data.m;
    for i in 0..data.n {
        let row = data.row(i);
        let mut best = f64::INFINITY;
        let mut arg = 0;
        for c in 0..k {
            let d = sq_dist(row, &centroids[c * m..(c + 1) * m]);
            if d < best {
                best = d;
                arg = c;
            }
        }
        labels[i] = arg;
        dist[i] = best;
    }
}

/// Moves the farthest point of a multi-member cluster into each empty
/// cluster, placing that cluster's centroid on the point.
fn repair_empty(
    data: &Rows,
    centroids: &mut [f64],
    k: usize,
    labels: &mut [usize],
    dist: &mut [f64],
) {
    let m = data.m;
    loop {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut far = None;
        let mut far_d = -1.0;
        for i in 0..data.n {
            if sizes[labels[i]] > 1 && dist[i] > far_d {
                far_d = dist[i];
                far = Some(i);
            }
        }
        let Some(i) = far else { return };
        labels[i] = empty;
        dist[i] = 0.0;
        centroids[empty * m..(empty + 1) * m].copy_from_slice(data.row(i));
    }
}

fn lloyd(data: &Rows, k: usize, opts: &KMeansOptions, rng: &mut Rng) -> KMeansModel {
    let (n, m) = (data.n, data.m);
    let mut centroids = plus_plus_init(data, k, rng);
    let mut labels = vec![0usize; n];
    let mut dist = vec![0.0; n];
    let mut trace = Vec::new();
    let mut n_iter = 0;

    for _ in 0..opts.max_iter {
        n_iter += 1;
        assign(data, &centroids, k, &mut labels, &mut dist);
        repair_empty(data, &mut centroids, k, &mut labels, &mut dist);
        trace.push(dist.iter().sum());

        let mut sums = vec![0.0; k * m];
        let mut counts = vec![0usize; k];
        for i in 0..n {
            let c = labels[i];
            counts[c] += 1;
            for (s, v) in sums[c * m..(c + 1) * m].iter_mut().zip(data.row(i)) {
                *s += v;
            }
        }
        let mut shift: f64 = 0.0;
        for c in 0..k {
            let cnt = counts[c] as f64;
            let slot = &mut centroids[c * m..(c + 1) * m];
            let mut d2 = 0.0;
            for (old, s) in slot.iter_mut().zip(&sums[c * m..(c + 1) * m]) {
                let new = s / cnt;
                d2 += (new - *old) * (new - *old);
                *old = new;
            }
            shift = shift.max(d2.sqrt());
        }
        if shift < opts.tol {
            break;
        }
    }

    assign(data, &centroids, k, &mut labels, &mut dist);
    repair_empty(data, &mut centroids, k, &mut labels, &mut dist);
    let inertia: f64 = dist.iter().sum();
    trace.push(inertia);

    KMeansModel {
        k,
        centroids: Array2::from_shape_vec((k, m), centroids).expect("k*m centroids"),
        assignments: labels,
        inertia,
        inertia_trace: trace,
        n_iter,
    }
}
