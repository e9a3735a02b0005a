use ndarray::ArrayView2;

use crate::error::{Error, Result};

/// Dense symmetric matrix of Euclidean distances between rows.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn euclidean(x: ArrayView2<f64>) -> Self {
        let (n, m) = x.dim();
        let rows: Vec<f64> = x.iter().copied().collect();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            let ri = &rows[i * m..(i + 1) * m];
            for j in (i + 1)..n {
                let rj = &rows[j * m..(j + 1) * m];
                let d = ri
                    .iter()
                    .zip(rj)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        DistanceMatrix { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// Mean silhouette coefficient over all samples under Euclidean distance.
pub fn silhouette(x: ArrayView2<f64>, labels: &[usize]) -> Result<f64> {
    if labels.len() != x.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "{} labels for {} samples",
            labels.len(),
            x.nrows()
        )));
    }
    check_labels(labels)?;
    silhouette_from_distances(&DistanceMatrix::euclidean(x), labels)
}

fn check_labels(labels: &[usize]) -> Result<()> {
    match labels.first() {
        Some(&first) if labels.iter().any(|&l| l != first) => Ok(()),
        _ => Err(Error::SingleClusterInput),
    }
}

/// Silhouette score from a precomputed distance matrix.
///
/// `a_i` is the mean distance to the other members of `i`'s cluster, `b_i`
/// the smallest mean distance to another cluster, and
/// `s_i = (b_i - a_i) / max(a_i, b_i)`. Members of singleton clusters, and
/// samples with `a_i = b_i = 0`, score 0.
pub fn silhouette_from_distances(dm: &DistanceMatrix, labels: &[usize]) -> Result<f64> {
    if labels.len() != dm.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} labels for {} samples",
            labels.len(),
            dm.len()
        )));
    }
    check_labels(labels)?;

    // compact ids so arbitrary label values work
    let mut ids: Vec<usize> = labels.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let compact: Vec<usize> = labels
        .iter()
        .map(|l| ids.binary_search(l).unwrap())
        .collect();
    let c = ids.len();
    let mut sizes = vec![0usize; c];
    for &l in &compact {
        sizes[l] += 1;
    }

    let n = dm.len();
    let mut sums = vec![0.0; c];
    let mut total = 0.0;
    for i in 0..n {
        sums.iter_mut().for_each(|s| *s = 0.0);
        for (j, &d) in dm.row(i).iter().enumerate() {
            sums[compact[j]] += d;
        }
        let own = compact[i];
        if sizes[own] < 2 {
            continue;
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..c)
            .filter(|&k| k != own)
            .map(|k| sums[k] / sizes[k] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / n as f64)
}
