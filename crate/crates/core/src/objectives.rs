//! Evaluation objectives and the subset-size regulariser.
//!
//! Every formulation is a pair `(f1, f2)` to be minimised: `f1` is the
//! negated silhouette, the negated out-of-bag accuracy, or the PCA
//! reconstruction loss; `f2` is `|x|` or `-|x|`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use ndarray::{Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::dataset::{standardize, SplitDataset};
use crate::error::{Error, Result};
use crate::mlcore::{
    forest_fit, forest_oob_accuracy, kmeans_fit, ols_fit, ols_predict, pca_fit, pca_project,
    silhouette_from_distances, DistanceMatrix, ForestConfig,
};
use crate::seed::derive_seed;
use crate::subset::FeatureSubset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evaluation {
    Silhouette,
    Accuracy,
    PcaLoss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeDirection {
    #[serde(alias = "min")]
    MinimiseSize,
    #[serde(alias = "max")]
    MaximiseSize,
}

impl Evaluation {
    pub const ALL: [Evaluation; 3] = [Evaluation::Silhouette, Evaluation::Accuracy, Evaluation::PcaLoss];

    pub fn as_str(self) -> &'static str {
        match self {
            Evaluation::Silhouette => "silhouette",
            Evaluation::Accuracy => "accuracy",
            Evaluation::PcaLoss => "pca-loss",
        }
    }
}

impl SizeDirection {
    pub const ALL: [SizeDirection; 2] = [SizeDirection::MinimiseSize, SizeDirection::MaximiseSize];

    pub fn as_str(self) -> &'static str {
        match self {
            SizeDirection::MinimiseSize => "min",
            SizeDirection::MaximiseSize => "max",
        }
    }
}

impl FromStr for Evaluation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "silhouette" => Ok(Evaluation::Silhouette),
            "accuracy" => Ok(Evaluation::Accuracy),
            "pca-loss" | "pca_loss" | "pca" => Ok(Evaluation::PcaLoss),
            other => Err(Error::InvalidFlags(format!("unknown objective {other:?}"))),
        }
    }
}

impl FromStr for SizeDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "minimise" | "minimise-size" => Ok(SizeDirection::MinimiseSize),
            "max" | "maximise" | "maximise-size" => Ok(SizeDirection::MaximiseSize),
            other => Err(Error::InvalidFlags(format!("unknown size direction {other:?}"))),
        }
    }
}

/// One of the six formulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub evaluation: Evaluation,
    pub size_direction: SizeDirection,
}

impl ObjectiveSpec {
    pub fn new(evaluation: Evaluation, size_direction: SizeDirection) -> Self {
        ObjectiveSpec {
            evaluation,
            size_direction,
        }
    }

    pub fn all() -> Vec<ObjectiveSpec> {
        Evaluation::ALL
            .iter()
            .flat_map(|&e| SizeDirection::ALL.iter().map(move |&s| ObjectiveSpec::new(e, s)))
            .collect()
    }

    /// Stable identifier such as `pca-loss-min`.
    pub fn id(&self) -> String {
        format!("{}-{}", self.evaluation.as_str(), self.size_direction.as_str())
    }
}

impl fmt::Display for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// `(f1, f2)` in the minimisation convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub f1: f64,
    pub f2: f64,
}

impl ObjectiveVector {
    pub fn new(f1: f64, f2: f64) -> Self {
        ObjectiveVector { f1, f2 }
    }

    /// Pareto dominance under minimisation.
    pub fn dominates(&self, other: &ObjectiveVector) -> bool {
        self.f1 <= other.f1 && self.f2 <= other.f2 && (self.f1 < other.f1 || self.f2 < other.f2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveParams {
    /// Candidate cluster counts for the silhouette objective.
    pub silhouette_k_min: usize,
    pub silhouette_k_max: usize,
    pub forest: ForestConfig,
    pub pca_components: usize,
}

impl Default for ObjectiveParams {
    fn default() -> Self {
        ObjectiveParams {
            silhouette_k_min: 2,
            silhouette_k_max: 5,
            forest: ForestConfig::default(),
            pca_components: 5,
        }
    }
}

/// Projection of the full training matrix onto its top-`k` principal axes,
/// computed once per context.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaTarget {
    pub z: Array2<f64>,
    pub k: usize,
}

impl PcaTarget {
    pub fn fit(x: ArrayView2<f64>, k: usize) -> Result<PcaTarget> {
        let model = pca_fit(x, k)?;
        let z = pca_project(&model, x)?;
        Ok(PcaTarget { z, k })
    }

    /// Loss of an intercept-only reconstruction, the largest PCA loss any
    /// subset can have.
    pub fn baseline_loss(&self) -> f64 {
        let n = self.z.nrows().max(1) as f64;
        let mean = self
            .z
            .mean_axis(Axis(0))
            .unwrap_or_else(|| ndarray::Array1::zeros(self.k));
        let c = &self.z - &mean;
        c.iter().map(|v| v * v).sum::<f64>() / n
    }
}

/// Everything an objective needs; immutable once built.
#[derive(Debug, Clone)]
pub struct EvaluationContext {
    pub train_x: Array2<f64>,
    pub train_y: Vec<usize>,
    pub pca_target: PcaTarget,
    pub params: ObjectiveParams,
    pub master_seed: u64,
}

impl EvaluationContext {
    /// `train_x` must already be standardised.
    pub fn new(
        train_x: Array2<f64>,
        train_y: Vec<usize>,
        params: ObjectiveParams,
        master_seed: u64,
    ) -> Result<Self> {
        if train_x.nrows() != train_y.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} rows, {} labels",
                train_x.nrows(),
                train_y.len()
            )));
        }
        let pca_target = PcaTarget::fit(train_x.view(), params.pca_components)?;
        Ok(EvaluationContext {
            train_x,
            train_y,
            pca_target,
            params,
            master_seed,
        })
    }

    /// Standardises the training rows of `split` and builds the context.
    pub fn from_split(split: &SplitDataset, params: ObjectiveParams, master_seed: u64) -> Result<Self> {
        let (train_x, _) = standardize(split.train.x.view(), split.train.x.view());
        Self::new(train_x, split.train.y.clone(), params, master_seed)
    }

    pub fn n_features(&self) -> usize {
        self.train_x.ncols()
    }

    /// Worst attainable value of each objective; size is offset by one so
    /// every non-empty subset lies strictly inside.
    pub fn reference_point(&self, spec: ObjectiveSpec) -> ObjectiveVector {
        let f1 = match spec.evaluation {
            Evaluation::Silhouette => 1.0,
            Evaluation::Accuracy => 0.0,
            Evaluation::PcaLoss => self.pca_target.baseline_loss(),
        };
        let f2 = match spec.size_direction {
            SizeDirection::MinimiseSize => self.n_features() as f64 + 1.0,
            SizeDirection::MaximiseSize => 0.0,
        };
        ObjectiveVector::new(f1, f2)
    }

    fn subset_seed(&self, tag: &str, subset: &FeatureSubset) -> u64 {
        derive_seed(self.master_seed, &[tag.into(), subset.to_bytes().as_slice().into()])
    }
}

/// Columns of `x` selected by `subset`, in ascending index order.
pub fn filter_columns(x: ArrayView2<f64>, subset: &FeatureSubset) -> Result<Array2<f64>> {
    if subset.dimension() != x.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "subset over {} features, matrix has {}",
            subset.dimension(),
            x.ncols()
        )));
    }
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(x.select(Axis(1), &subset.indices()))
}

/// `-max_k silhouette(k-means_k(X_x))` over the configured k range; ties go
/// to the smaller k.
pub fn eval_silhouette_objective(subset: &FeatureSubset, ctx: &EvaluationContext) -> Result<f64> {
    let xs = filter_columns(ctx.train_x.view(), subset)?;
    let n = xs.nrows();
    if n < 2 {
        return Err(Error::DegenerateClustering(format!("{n} training samples")));
    }
    let dm = DistanceMatrix::euclidean(xs.view());
    let base = ctx.subset_seed("silhouette", subset);
    let k_max = ctx.params.silhouette_k_max.min(n);
    let mut best = f64::NEG_INFINITY;
    for k in ctx.params.silhouette_k_min.max(2)..=k_max {
        let model = kmeans_fit(xs.view(), k, derive_seed(base, &[k.into()]))?;
        let score = silhouette_from_distances(&dm, &model.assignments)?;
        if score > best {
            best = score;
        }
    }
    if !best.is_finite() {
        return Err(Error::DegenerateClustering("empty k range".into()));
    }
    check_range("silhouette", -best, -1.0, 1.0)
}

/// `-OOB accuracy` of a random forest on `(X_x, y)`.
pub fn eval_accuracy_objective(subset: &FeatureSubset, ctx: &EvaluationContext) -> Result<f64> {
    let xs = filter_columns(ctx.train_x.view(), subset)?;
    let model = forest_fit(
        xs.view(),
        &ctx.train_y,
        &ctx.params.forest,
        ctx.subset_seed("accuracy", subset),
    )?;
    let acc = forest_oob_accuracy(&model, &ctx.train_y)?;
    check_range("accuracy", -acc, -1.0, 0.0)
}

/// Mean squared row error `(1/n) Σ ‖Z_i − Ẑ_i‖²` of the least-squares
/// reconstruction of the PCA target from `X_x`.
pub fn eval_pca_loss_objective(subset: &FeatureSubset, ctx: &EvaluationContext) -> Result<f64> {
    let xs = filter_columns(ctx.train_x.view(), subset)?;
    pca_loss(xs.view(), ctx.pca_target.z.view())
}

pub(crate) fn pca_loss(xs: ArrayView2<f64>, z: ArrayView2<f64>) -> Result<f64> {
    let model = ols_fit(xs, z)?;
    let pred = ols_predict(&model, xs)?;
    let n = z.nrows().max(1) as f64;
    let sse: f64 = z.iter().zip(pred.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
    check_range("pca loss", sse / n, 0.0, f64::INFINITY)
}

/// `|x|` when minimising size, `-|x|` when maximising.
pub fn eval_size_regulariser(subset: &FeatureSubset, direction: SizeDirection) -> f64 {
    let size = subset.cardinality() as f64;
    match direction {
        SizeDirection::MinimiseSize => size,
        SizeDirection::MaximiseSize => -size,
    }
}

fn check_range(what: &str, v: f64, lo: f64, hi: f64) -> Result<f64> {
    if v.is_finite() && v >= lo && v <= hi {
        Ok(v)
    } else {
        Err(Error::ObjectiveOutOfRange(format!("{what} = {v} outside [{lo}, {hi}]")))
    }
}

/// Uncached evaluation of one formulation.
pub fn evaluate(
    subset: &FeatureSubset,
    spec: ObjectiveSpec,
    ctx: &EvaluationContext,
) -> Result<ObjectiveVector> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let f1 = match spec.evaluation {
        Evaluation::Silhouette => eval_silhouette_objective(subset, ctx)?,
        Evaluation::Accuracy => eval_accuracy_objective(subset, ctx)?,
        Evaluation::PcaLoss => eval_pca_loss_objective(subset, ctx)?,
    };
    Ok(ObjectiveVector::new(
        f1,
        eval_size_regulariser(subset, spec.size_direction),
    ))
}

/// Memoising front end over [`evaluate`].
///
/// Values depend only on `(subset, spec, ctx)`, so racing evaluations of the
/// same key store identical results.
#[derive(Debug)]
pub struct Evaluator {
    ctx: Arc<EvaluationContext>,
    cache: Mutex<HashMap<(ObjectiveSpec, FeatureSubset), ObjectiveVector>>,
    misses: AtomicUsize,
    hits: AtomicUsize,
}

/// Result of a cached evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub value: ObjectiveVector,
    pub cache_hit: bool,
}

impl Evaluator {
    pub fn new(ctx: Arc<EvaluationContext>) -> Self {
        Evaluator {
            ctx,
            cache: Mutex::new(HashMap::new()),
            misses: AtomicUsize::new(0),
            hits: AtomicUsize::new(0),
        }
    }

    pub fn context(&self) -> &Arc<EvaluationContext> {
        &self.ctx
    }

    pub fn evaluate(&self, subset: &FeatureSubset, spec: ObjectiveSpec) -> Result<Evaluated> {
        let key = (spec, subset.clone());
        if let Some(&value) = self.cache.lock().unwrap().get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(Evaluated {
                value,
                cache_hit: true,
            });
        }
        let value = evaluate(subset, spec, &self.ctx)?;
        self.cache.lock().unwrap().entry(key).or_insert(value);
        self.misses.fetch_add(1, Ordering::Relaxed);
        Ok(Evaluated {
            value,
            cache_hit: false,
        })
    }

    /// Number of fresh (uncached) evaluations so far.
    pub fn evaluations(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn cache_hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn toy_ctx() -> EvaluationContext {
        let x = array![
            [0.0, 0.0, 1.0],
            [0.0, 0.0, 2.0],
            [5.0, 5.0, 1.5],
            [5.0, 5.0, 0.5],
            [0.0, 0.1, 3.0],
            [5.0, 4.9, 2.5]
        ];
        let params = ObjectiveParams {
            pca_components: 2,
            silhouette_k_max: 3,
            ..Default::default()
        };
        EvaluationContext::new(x, vec![0, 0, 1, 1, 0, 1], params, 1).unwrap()
    }

    #[test]
    fn filter_columns_contract() {
        let x = array![[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]];
        let all = filter_columns(x.view(), &FeatureSubset::full(3)).unwrap();
        assert_eq!(all, x);
        let one = filter_columns(x.view(), &FeatureSubset::from_indices(3, [1])).unwrap();
        assert_eq!(one.column(0), x.column(1));
        assert!(matches!(
            filter_columns(x.view(), &FeatureSubset::empty(3)),
            Err(Error::EmptySubset)
        ));
    }

    #[test]
    fn regulariser_signs() {
        let x = FeatureSubset::from_bitstring("10110").unwrap();
        assert_eq!(eval_size_regulariser(&x, SizeDirection::MinimiseSize), 3.0);
        assert_eq!(eval_size_regulariser(&x, SizeDirection::MaximiseSize), -3.0);
        assert_eq!(eval_size_regulariser(&FeatureSubset::full(5), SizeDirection::MinimiseSize), 5.0);
    }

    #[test]
    fn two_point_masses_give_perfect_silhouette() {
        let x = array![[0.0, 0.0], [0.0, 0.0], [5.0, 5.0], [5.0, 5.0]];
        let params = ObjectiveParams {
            pca_components: 1,
            silhouette_k_max: 2,
            ..Default::default()
        };
        let ctx = EvaluationContext::new(x, vec![0, 0, 1, 1], params, 0).unwrap();
        let f1 = eval_silhouette_objective(&FeatureSubset::full(2), &ctx).unwrap();
        assert_eq!(f1, -1.0);
    }

    #[test]
    fn full_subset_pca_loss_vanishes() {
        let ctx = toy_ctx();
        let f1 = eval_pca_loss_objective(&FeatureSubset::full(3), &ctx).unwrap();
        assert!(f1 <= 1e-8, "{f1}");
    }

    #[test]
    fn single_axis_latent_space() {
        let x = array![[1.0, 0.0], [2.0, 0.0], [-3.0, 0.0], [0.5, 0.0]];
        let params = ObjectiveParams {
            pca_components: 1,
            ..Default::default()
        };
        let ctx = EvaluationContext::new(x, vec![0, 1, 0, 1], params, 0).unwrap();
        let f1 = eval_pca_loss_objective(&FeatureSubset::from_indices(2, [0]), &ctx).unwrap();
        assert!(f1 <= 1e-8);
    }

    #[test]
    fn evaluator_memoises() {
        let ev = Evaluator::new(Arc::new(toy_ctx()));
        let spec = ObjectiveSpec::new(Evaluation::PcaLoss, SizeDirection::MinimiseSize);
        let s = FeatureSubset::from_indices(3, [0, 2]);
        let a = ev.evaluate(&s, spec).unwrap();
        let b = ev.evaluate(&s, spec).unwrap();
        assert!(!a.cache_hit && b.cache_hit);
        assert_eq!(a.value, b.value);
        assert_eq!(ev.evaluations(), 1);
        assert_eq!(ev.cache_hits(), 1);

        let full = ev.evaluate(&FeatureSubset::full(3), spec).unwrap().value;
        assert!(full.f1 <= 1e-8 && full.f2 == 3.0);
    }

    #[test]
    fn spec_ids_and_parsing() {
        let ids: Vec<String> = ObjectiveSpec::all().iter().map(|s| s.id()).collect();
        assert_eq!(
            ids,
            ["silhouette-min", "silhouette-max", "accuracy-min", "accuracy-max", "pca-loss-min", "pca-loss-max"]
        );
        assert_eq!("pca-loss".parse::<Evaluation>().unwrap(), Evaluation::PcaLoss);
        assert!("nope".parse::<SizeDirection>().is_err());
    }

    #[test]
    fn dominance() {
        let a = ObjectiveVector::new(1.0, 2.0);
        assert!(a.dominates(&ObjectiveVector::new(1.0, 3.0)));
        assert!(!a.dominates(&a));
        assert!(!a.dominates(&ObjectiveVector::new(0.0, 3.0)));
    }
}
