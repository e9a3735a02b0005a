//! Random forest classifier with out-of-bag bookkeeping.
//!
//! Bootstrap replicates are stored as per-sample integer weights over the
//! unique in-bag samples; impurity uses the weighted class counts.

use ndarray::ArrayView2;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{derived_rng, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// `⌈√m⌉` candidate features per node.
    Sqrt,
    All,
    Count(usize),
}

impl MaxFeatures {
    fn resolve(self, m: usize) -> usize {
        let k = match self {
            MaxFeatures::Sqrt => (m as f64).sqrt().ceil() as usize,
            MaxFeatures::All => m,
            MaxFeatures::Count(c) => c,
        };
        k.clamp(1, m.max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_features: MaxFeatures,
    pub min_samples_split: usize,
    /// Test hook: permit fitting a constant target.
    #[serde(default)]
    pub allow_single_class: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 100,
            max_features: MaxFeatures::Sqrt,
            min_samples_split: 2,
            allow_single_class: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf {
        class: usize,
        counts: Vec<u32>,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn predict_row(&self, row: impl Fn(usize) -> f64) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { class, .. } => return *class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row(*feature) <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }

    /// Smallest total training weight held by any leaf.
    pub fn min_leaf_weight(&self) -> u32 {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Leaf { counts, .. } => Some(counts.iter().sum()),
                _ => None,
            })
            .min()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    pub trees: Vec<DecisionTree>,
    /// `n × n_classes` vote tallies from trees that did not see each sample.
    pub oob_votes: Vec<Vec<u32>>,
    pub n_classes: usize,
    pub n_features: usize,
    pub config: ForestConfig,
    pub seed: u64,
}

fn argmax(counts: &[u32]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Column-major copy of the design matrix plus dense per-feature ranks, so
/// node-level sorting works on packed integer keys.
struct Columns {
    n: usize,
    cols: Vec<Vec<f64>>,
    /// `ranks[f][i]` is the dense rank of sample `i` in feature `f`.
    ranks: Vec<Vec<u32>>,
    /// Distinct values of each feature, ascending.
    levels: Vec<Vec<f64>>,
}

impl Columns {
    fn new(x: ArrayView2<f64>) -> Self {
        let n = x.nrows();
        let cols: Vec<Vec<f64>> = x.columns().into_iter().map(|c| c.to_vec()).collect();
        let mut ranks = Vec::with_capacity(cols.len());
        let mut levels = Vec::with_capacity(cols.len());
        for col in &cols {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_unstable_by(|&a, &b| col[a].total_cmp(&col[b]));
            let mut rank = vec![0u32; n];
            let mut distinct: Vec<f64> = Vec::new();
            for &i in &order {
                if distinct.last() != Some(&col[i]) {
                    distinct.push(col[i]);
                }
                rank[i] = (distinct.len() - 1) as u32;
            }
            ranks.push(rank);
            levels.push(distinct);
        }
        Columns {
            n,
            cols,
            ranks,
            levels,
        }
    }
}

struct TreeBuilder<'a> {
    data: &'a Columns,
    y: &'a [usize],
    weight: &'a [u32],
    n_classes: usize,
    max_features: usize,
    min_samples_split: usize,
    buf: Vec<u64>,
    features: Vec<usize>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl TreeBuilder<'_> {
    fn counts(&self, samples: &[usize]) -> Vec<u32> {
        let mut c = vec![0u32; self.n_classes];
        for &s in samples {
            c[self.y[s]] += self.weight[s];
        }
        c
    }

    fn find_split(&mut self, samples: &[usize], rng: &mut Rng) -> Option<BestSplit> {
        let m = self.features.len();
        let mut best: Option<BestSplit> = None;
        let mut visited_nonconstant = 0;
        let mut left = vec![0u32; self.n_classes];
        let mut right = vec![0u32; self.n_classes];
        let total = self.counts(samples);
        // lazy Fisher–Yates: draw features until enough non-constant ones
        for drawn in 0..m {
            if visited_nonconstant >= self.max_features {
                break;
            }
            let pick = rng.random_range(drawn..m);
            self.features.swap(drawn, pick);
            let f = self.features[drawn];
            let rank = &self.data.ranks[f];

            // key = rank << 32 | sample
            self.buf.clear();
            self.buf
                .extend(samples.iter().map(|&s| ((rank[s] as u64) << 32) | s as u64));
            self.buf.sort_unstable();
            let rank_of = |k: u64| (k >> 32) as usize;
            if rank_of(self.buf[0]) == rank_of(self.buf[self.buf.len() - 1]) {
                continue;
            }
            visited_nonconstant += 1;

            left.iter_mut().for_each(|c| *c = 0);
            right.copy_from_slice(&total);
            let (mut n_left, mut n_right) = (0u64, total.iter().map(|&c| c as u64).sum::<u64>());
            let mut best_here: Option<(f64, usize)> = None;
            for i in 0..self.buf.len() - 1 {
                let key = self.buf[i];
                let s = (key & 0xffff_ffff) as usize;
                let w = self.weight[s];
                let cls = self.y[s];
                left[cls] += w;
                right[cls] -= w;
                n_left += w as u64;
                n_right -= w as u64;
                if rank_of(key) == rank_of(self.buf[i + 1]) {
                    continue;
                }
                // maximising Σc_L²/N_L + Σc_R²/N_R minimises weighted Gini
                let sl: f64 = left.iter().map(|&c| (c as f64) * (c as f64)).sum();
                let sr: f64 = right.iter().map(|&c| (c as f64) * (c as f64)).sum();
                let score = sl / n_left as f64 + sr / n_right as f64;
                if best_here.is_none_or(|(b, _)| score > b) {
                    best_here = Some((score, i));
                }
            }
            if let Some((score, i)) = best_here {
                if best.as_ref().is_none_or(|b| score > b.score) {
                    let levels = &self.data.levels[f];
                    let v = levels[rank_of(self.buf[i])];
                    let next = levels[rank_of(self.buf[i + 1])];
                    let mut threshold = 0.5 * (v + next);
                    if threshold >= next {
                        threshold = v;
                    }
                    best = Some(BestSplit {
                        feature: f,
                        threshold,
                        score,
                    });
                }
            }
        }
        best
    }

    fn build(&mut self, mut samples: Vec<usize>, rng: &mut Rng) -> DecisionTree {
        let mut nodes = Vec::new();
        // (node slot, start, end) over `samples`
        let mut stack = vec![(0usize, 0usize, samples.len())];
        nodes.push(Node::Leaf {
            class: 0,
            counts: Vec::new(),
        });
        while let Some((slot, start, end)) = stack.pop() {
            let counts = self.counts(&samples[start..end]);
            let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
            let split = if pure || end - start < self.min_samples_split {
                None
            } else {
                self.find_split(&samples[start..end], rng)
            };
            match split {
                None => {
                    nodes[slot] = Node::Leaf {
                        class: argmax(&counts),
                        counts,
                    };
                }
                Some(best) => {
                    let col = &self.data.cols[best.feature];
                    let range = &mut samples[start..end];
                    let mut mid = 0;
                    for i in 0..range.len() {
                        if col[range[i]] <= best.threshold {
                            range.swap(i, mid);
                            mid += 1;
                        }
                    }
                    let left = nodes.len();
                    let right = left + 1;
                    let placeholder = || Node::Leaf {
                        class: 0,
                        counts: Vec::new(),
                    };
                    nodes.push(placeholder());
                    nodes.push(placeholder());
                    nodes[slot] = Node::Split {
                        feature: best.feature,
                        threshold: best.threshold,
                        left,
                        right,
                    };
                    stack.push((right, start + mid, end));
                    stack.push((left, start, start + mid));
                }
            }
        }
        DecisionTree { nodes }
    }
}

/// Fits `config.n_trees` trees on bootstrap replicates of `(x, y)`.
///
/// Tree `t` draws from a stream derived from `(seed, t)`, so the result does
/// not depend on how trees are scheduled across threads.
pub fn forest_fit(
    x: ArrayView2<f64>,
    y: &[usize],
    config: &ForestConfig,
    seed: u64,
) -> Result<ForestModel> {
    let (n, m) = x.dim();
    if n == 0 || m == 0 {
        return Err(Error::EmptyInput);
    }
    if y.len() != n {
        return Err(Error::ShapeMismatch(format!("{} labels for {n} rows", y.len())));
    }
    let first = y[0];
    if !config.allow_single_class && y.iter().all(|&c| c == first) {
        return Err(Error::SingleClassFit);
    }
    let n_classes = y.iter().copied().max().unwrap_or(0) + 1;
    let data = Columns::new(x);
    let max_features = config.max_features.resolve(m);

    let grown: Vec<(DecisionTree, Vec<(usize, usize)>)> = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = derived_rng(seed, &["tree".into(), t.into()]);
            let mut weight = vec![0u32; n];
            for _ in 0..n {
                weight[rng.random_range(0..n)] += 1;
            }
            let in_bag: Vec<usize> = (0..n).filter(|&i| weight[i] > 0).collect();
            let mut features: Vec<usize> = (0..m).collect();
            features.shuffle(&mut rng);
            let mut builder = TreeBuilder {
                data: &data,
                y,
                weight: &weight,
                n_classes,
                max_features,
                min_samples_split: config.min_samples_split.max(2),
                buf: Vec::with_capacity(in_bag.len()),
                features,
            };
            let tree = builder.build(in_bag, &mut rng);
            let oob = (0..n)
                .filter(|&i| weight[i] == 0)
                .map(|i| (i, tree.predict_row(|f| data.cols[f][i])))
                .collect();
            (tree, oob)
        })
        .collect();

    let mut oob_votes = vec![vec![0u32; n_classes]; data.n];
    let mut trees = Vec::with_capacity(grown.len());
    for (tree, oob) in grown {
        for (i, cls) in oob {
            oob_votes[i][cls] += 1;
        }
        trees.push(tree);
    }
    Ok(ForestModel {
        trees,
        oob_votes,
        n_classes,
        n_features: m,
        config: config.clone(),
        seed,
    })
}

/// Majority vote over trees; ties go to the smallest class index.
pub fn forest_predict(model: &ForestModel, x: ArrayView2<f64>) -> Result<Vec<usize>> {
    if x.ncols() != model.n_features {
        return Err(Error::ShapeMismatch(format!(
            "forest fitted on {} features, got {}",
            model.n_features,
            x.ncols()
        )));
    }
    Ok(x.rows()
        .into_iter()
        .map(|row| {
            let mut votes = vec![0u32; model.n_classes];
            for tree in &model.trees {
                votes[tree.predict_row(|f| row[f])] += 1;
            }
            argmax(&votes)
        })
        .collect())
}

/// Accuracy of the out-of-bag majority vote over samples with at least one
/// out-of-bag vote.
pub fn forest_oob_accuracy(model: &ForestModel, y: &[usize]) -> Result<f64> {
    if y.len() != model.oob_votes.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} labels for {} fitted samples",
            y.len(),
            model.oob_votes.len()
        )));
    }
    let (mut seen, mut correct) = (0usize, 0usize);
    for (votes, &truth) in model.oob_votes.iter().zip(y) {
        if votes.iter().any(|&v| v > 0) {
            seen += 1;
            correct += (argmax(votes) == truth) as usize;
        }
    }
    if seen == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(correct as f64 / seen as f64)
}

/// Proportion of correct predictions.
pub fn accuracy(predicted: &[usize], truth: &[usize]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let correct = predicted.iter().zip(truth).filter(|(a, b)| a == b).count();
    correct as f64 / truth.len() as f64
}
