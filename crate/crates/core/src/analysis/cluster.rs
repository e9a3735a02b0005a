//! Average-linkage agglomerative clustering of bitmasks under Jaccard
//! distance.

use super::front::ParetoRecord;
use crate::error::{Error, Result};
use crate::subset::FeatureSubset;

/// One merge of the dendrogram. Leaves are `0..n_leaves`; the cluster formed
/// by merge `i` has id `n_leaves + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub distance: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Distinct bitmasks in canonical (ascending) order; these are the leaves.
    pub leaves: Vec<FeatureSubset>,
    pub linkage: Vec<Merge>,
    /// Leaf ids in dendrogram order.
    pub leaf_order: Vec<usize>,
    /// Group label of every leaf.
    pub leaf_labels: Vec<String>,
    /// Group label of every input record.
    pub labels: Vec<String>,
    pub n_clusters: usize,
}

impl Clustering {
    /// Record indices ordered by dendrogram leaf order, then input index.
    pub fn record_order(&self, records: &[ParetoRecord]) -> Vec<usize> {
        let mut position = vec![0; self.leaves.len()];
        for (p, &leaf) in self.leaf_order.iter().enumerate() {
            position[leaf] = p;
        }
        let mut order: Vec<usize> = (0..records.len()).collect();
        order.sort_by_key(|&i| (position[self.leaf_of(&records[i].subset)], i));
        order
    }

    pub fn leaf_of(&self, subset: &FeatureSubset) -> usize {
        self.leaves.binary_search(subset).expect("record mask is a leaf")
    }
}

/// Full average-linkage merge sequence over `masks`. Among equally distant
/// pairs the one whose smallest leaves are lowest merges first.
pub fn average_linkage(masks: &[FeatureSubset]) -> Vec<Merge> {
    let n = masks.len();
    // pairwise distance sums between active clusters
    let mut sums = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = masks[i].jaccard_distance(&masks[j]);
            sums[i][j] = d;
            sums[j][i] = d;
        }
    }
    // slot -> (cluster id, size, smallest leaf)
    let mut active: Vec<Option<(usize, usize, usize)>> = (0..n).map(|i| Some((i, 1, i))).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for step in 0..n.saturating_sub(1) {
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for a in 0..n {
            let Some((_, sa, la)) = active[a] else { continue };
            for b in 0..n {
                let Some((_, sb, lb)) = active[b] else { continue };
                if lb <= la {
                    continue;
                }
                let dist = sums[a][b] / (sa * sb) as f64;
                let better = match best {
                    None => true,
                    Some((bd, bla, blb, _, _)) => dist < bd || (dist == bd && (la, lb) < (bla, blb)),
                };
                if better {
                    best = Some((dist, la, lb, a, b));
                }
            }
        }
        let (dist, _, _, a, b) = best.expect("at least two active clusters");
        let (ida, sa, la) = active[a].unwrap();
        let (idb, sb, _) = active[b].unwrap();
        merges.push(Merge {
            left: ida,
            right: idb,
            distance: dist,
            size: sa + sb,
        });
        for c in 0..n {
            if c != a && c != b {
                let s = sums[a][c] + sums[b][c];
                sums[a][c] = s;
                sums[c][a] = s;
            }
        }
        active[a] = Some((n + step, sa + sb, la));
        active[b] = None;
    }
    merges
}

/// Leaves of the dendrogram in left-to-right order.
pub fn dendrogram_leaf_order(n_leaves: usize, linkage: &[Merge]) -> Vec<usize> {
    if n_leaves == 0 {
        return Vec::new();
    }
    let mut order = Vec::with_capacity(n_leaves);
    let mut stack = vec![n_leaves + linkage.len() - 1];
    while let Some(id) = stack.pop() {
        if id < n_leaves {
            order.push(id);
        } else {
            let m = &linkage[id - n_leaves];
            stack.push(m.right);
            stack.push(m.left);
        }
    }
    order
}

/// Groups records into `n_clusters` clusters labelled `C1..` in dendrogram
/// leaf order. Identical bitmasks always share a leaf.
pub fn cluster_solutions(records: &[ParetoRecord], n_clusters: usize) -> Result<Clustering> {
    if n_clusters == 0 {
        return Err(Error::InvalidConfig("n_clusters must be at least 1".into()));
    }
    let mut leaves: Vec<FeatureSubset> = records.iter().map(|r| r.subset.clone()).collect();
    leaves.sort();
    leaves.dedup();
    let n = leaves.len();
    if n < n_clusters || n == 0 {
        return Err(Error::TooFewRecords {
            have: n,
            want: n_clusters,
        });
    }
    let linkage = average_linkage(&leaves);
    let leaf_order = dendrogram_leaf_order(n, &linkage);

    // union the first n - k merges
    let mut group: Vec<usize> = (0..n + linkage.len()).collect();
    fn find(group: &mut [usize], mut x: usize) -> usize {
        while group[x] != x {
            group[x] = group[group[x]];
            x = group[x];
        }
        x
    }
    for (i, m) in linkage.iter().take(n - n_clusters).enumerate() {
        let id = n + i;
        let (l, r) = (find(&mut group, m.left), find(&mut group, m.right));
        group[l] = id;
        group[r] = id;
    }
    let mut names: Vec<(usize, String)> = Vec::new();
    let mut leaf_labels = vec![String::new(); n];
    for &leaf in &leaf_order {
        let root = find(&mut group, leaf);
        let label = match names.iter().find(|(r, _)| *r == root) {
            Some((_, l)) => l.clone(),
            None => {
                let l = format!("C{}", names.len() + 1);
                names.push((root, l.clone()));
                l
            }
        };
        leaf_labels[leaf] = label;
    }
    let mut clustering = Clustering {
        leaves,
        linkage,
        leaf_order,
        leaf_labels,
        labels: Vec::new(),
        n_clusters,
    };
    clustering.labels = records
        .iter()
        .map(|r| clustering.leaf_labels[clustering.leaf_of(&r.subset)].clone())
        .collect();
    Ok(clustering)
}
