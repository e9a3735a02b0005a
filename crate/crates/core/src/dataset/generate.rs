//! Synthetic dataset generator with a known feature taxonomy.
//!
//! Blocks are laid out in a fixed order (informative, linear redundant,
//! non-linear redundant, Gaussian noise, structured noise, sweep) and each
//! block draws from its own stream derived from the master seed.

use nalgebra::DMatrix;
use ndarray::{concatenate, Array2, ArrayView2, Axis};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::seed::{derived_rng, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureKind {
    Informative,
    LinearRedundant,
    NonLinearRedundant,
    GaussianNoise,
    StructuredNoise,
    Sweep,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 6] = [
        FeatureKind::Informative,
        FeatureKind::LinearRedundant,
        FeatureKind::NonLinearRedundant,
        FeatureKind::GaussianNoise,
        FeatureKind::StructuredNoise,
        FeatureKind::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::Informative => "informative",
            FeatureKind::LinearRedundant => "linear_redundant",
            FeatureKind::NonLinearRedundant => "nonlinear_redundant",
            FeatureKind::GaussianNoise => "gaussian_noise",
            FeatureKind::StructuredNoise => "structured_noise",
            FeatureKind::Sweep => "sweep",
        }
    }

    pub fn has_lineage(self) -> bool {
        matches!(
            self,
            FeatureKind::LinearRedundant | FeatureKind::NonLinearRedundant | FeatureKind::Sweep
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonLinearKind {
    Square,
    Sine,
    Tanh,
    Product,
    Abs,
}

impl NonLinearKind {
    pub const ALL: [NonLinearKind; 5] = [
        NonLinearKind::Square,
        NonLinearKind::Sine,
        NonLinearKind::Tanh,
        NonLinearKind::Product,
        NonLinearKind::Abs,
    ];

    pub fn arity(self) -> usize {
        match self {
            NonLinearKind::Product => 2,
            _ => 1,
        }
    }

    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            NonLinearKind::Square => a * a,
            NonLinearKind::Sine => a.sin(),
            NonLinearKind::Tanh => a.tanh(),
            NonLinearKind::Product => a * b,
            NonLinearKind::Abs => a.abs(),
        }
    }
}

/// How a derived feature was built from its parents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    /// `Σ w_p · parent_p + ε`
    Linear { weights: Vec<f64>, noise_std: f64 },
    NonLinear { op: NonLinearKind, noise_std: f64 },
    /// `parent + σ · ε`
    Perturb { sigma: f64 },
}

/// Provenance of a derived feature; indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lineage {
    pub feature: usize,
    pub parents: Vec<usize>,
    pub transform: Transform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub n_samples: usize,
    pub n_classes: usize,
    pub n_informative: usize,
    pub n_linear_redundant: usize,
    pub n_nonlinear_redundant: usize,
    pub n_gaussian_noise: usize,
    pub n_structured_noise: usize,
    pub n_sweep: usize,
    pub class_separation: f64,
    pub label_flip_fraction: f64,
    pub redundant_noise_std: f64,
    pub linear_parents: usize,
    pub sweep_noise_levels: Vec<f64>,
    pub structured_noise_groups: usize,
    pub master_seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n_samples: 1000,
            n_classes: 3,
            n_informative: 10,
            n_linear_redundant: 5,
            n_nonlinear_redundant: 5,
            n_gaussian_noise: 5,
            n_structured_noise: 5,
            n_sweep: 55,
            class_separation: 1.0,
            label_flip_fraction: 0.05,
            redundant_noise_std: 0.05,
            linear_parents: 3,
            sweep_noise_levels: vec![0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
            structured_noise_groups: 4,
            master_seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(seed: u64) -> Self {
        GeneratorConfig {
            master_seed: seed,
            ..Self::default()
        }
    }

    /// Total feature count `d`.
    pub fn n_features(&self) -> usize {
        self.n_informative
            + self.n_linear_redundant
            + self.n_nonlinear_redundant
            + self.n_gaussian_noise
            + self.n_structured_noise
            + self.n_sweep
    }

    /// Feature kind per index, in block order.
    pub fn kinds(&self) -> Vec<FeatureKind> {
        let blocks = [
            (FeatureKind::Informative, self.n_informative),
            (FeatureKind::LinearRedundant, self.n_linear_redundant),
            (FeatureKind::NonLinearRedundant, self.n_nonlinear_redundant),
            (FeatureKind::GaussianNoise, self.n_gaussian_noise),
            (FeatureKind::StructuredNoise, self.n_structured_noise),
            (FeatureKind::Sweep, self.n_sweep),
        ];
        blocks
            .iter()
            .flat_map(|&(k, c)| std::iter::repeat_n(k, c))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n_classes < 2 {
            return bad(format!("n_classes = {} (need >= 2)", self.n_classes));
        }
        if self.n_samples < self.n_classes {
            return bad(format!(
                "n_samples = {} cannot cover {} classes",
                self.n_samples, self.n_classes
            ));
        }
        if self.n_informative == 0 {
            return bad("n_informative must be >= 1".into());
        }
        if self.n_informative < 64 && (1u64 << self.n_informative) < self.n_classes as u64 {
            return bad(format!(
                "{} informative dimensions cannot place {} distinct class vertices",
                self.n_informative, self.n_classes
            ));
        }
        if !(0.0..0.5).contains(&self.label_flip_fraction) {
            return bad(format!(
                "label_flip_fraction = {} outside [0, 0.5)",
                self.label_flip_fraction
            ));
        }
        if !(self.class_separation > 0.0 && self.class_separation.is_finite()) {
            return bad(format!("class_separation = {}", self.class_separation));
        }
        if !(self.redundant_noise_std > 0.0 && self.redundant_noise_std.is_finite()) {
            return bad(format!("redundant_noise_std = {}", self.redundant_noise_std));
        }
        if self.n_linear_redundant > 0
            && (self.linear_parents == 0 || self.linear_parents > self.n_informative)
        {
            return bad(format!(
                "linear_parents = {} with {} informative features",
                self.linear_parents, self.n_informative
            ));
        }
        if self.n_nonlinear_redundant > 0 && self.n_informative < 2 {
            return bad("non-linear products need >= 2 informative features".into());
        }
        if self.n_sweep > 0 {
            if self.sweep_noise_levels.is_empty() {
                return bad("sweep_noise_levels is empty".into());
            }
            if self.sweep_noise_levels.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
                return bad("sweep noise levels must be positive".into());
            }
            if self.sweep_noise_levels.windows(2).any(|w| w[0] > w[1]) {
                return bad("sweep noise levels must be ascending".into());
            }
        }
        if self.n_structured_noise > 0 {
            check_groups(self.structured_noise_groups, self.n_classes)?;
        }
        Ok(())
    }
}

fn check_groups(groups: usize, n_classes: usize) -> Result<()> {
    if groups < 2 || groups == n_classes {
        Err(Error::InvalidGroups { groups, n_classes })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    /// `n × d` sample matrix.
    pub x: Array2<f64>,
    pub y: Vec<usize>,
    pub kinds: Vec<FeatureKind>,
    /// One record per derived feature, ordered by feature index.
    pub lineages: Vec<Lineage>,
    pub config: GeneratorConfig,
}

impl SyntheticDataset {
    pub fn n_samples(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    pub fn n_classes(&self) -> usize {
        self.config.n_classes
    }

    pub fn lineage_of(&self, feature: usize) -> Option<&Lineage> {
        self.lineages.iter().find(|l| l.feature == feature)
    }

    /// Indices of features of the given kind.
    pub fn indices_of(&self, kind: FeatureKind) -> Vec<usize> {
        self.kinds
            .iter()
            .enumerate()
            .filter_map(|(i, &k)| (k == kind).then_some(i))
            .collect()
    }

    /// Copy of the given rows, keeping taxonomy and lineage.
    pub fn select_rows(&self, rows: &[usize]) -> SyntheticDataset {
        SyntheticDataset {
            x: self.x.select(Axis(0), rows),
            y: rows.iter().map(|&r| self.y[r]).collect(),
            kinds: self.kinds.clone(),
            lineages: self.lineages.clone(),
            config: self.config.clone(),
        }
    }

    /// SHA-256 over the shape, raw sample bits, labels and taxonomy.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n_samples() as u64).to_le_bytes());
        h.update((self.n_features() as u64).to_le_bytes());
        for v in self.x.iter() {
            h.update(v.to_bits().to_le_bytes());
        }
        for &c in &self.y {
            h.update((c as u64).to_le_bytes());
        }
        for k in &self.kinds {
            h.update(k.name().as_bytes());
            h.update([0u8]);
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn feature_name(j: usize) -> String {
    format!("feat_{}", j + 1)
}

/// Mixing applied to the informative block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mixing {
    /// Random full-rank matrix with uniform `[-1, 1]` entries.
    Random,
    /// Test hook: no mixing.
    Identity,
}

#[derive(Debug, Clone)]
pub struct InformativeBlock {
    pub values: Array2<f64>,
    pub labels: Vec<usize>,
    pub clean_labels: Vec<usize>,
    /// Samples whose label was reassigned.
    pub flipped: Vec<usize>,
}

/// Class-conditional Gaussians around distinct hypercube vertices.
///
/// Every sample is `z·A + c_y` with `z ~ N(0, I)`, `A` the mixing matrix and
/// `c_y ∈ {±class_separation}^p` its class vertex. Classes are balanced (the
/// first classes take the remainder). Each label is then reassigned with
/// probability `label_flip_fraction` to a different class chosen uniformly.
pub fn make_informative(
    config: &GeneratorConfig,
    mixing: Mixing,
    rng: &mut Rng,
) -> Result<InformativeBlock> {
    let (n, p, c) = (config.n_samples, config.n_informative, config.n_classes);
    if c < 2 || n < c || p == 0 {
        return Err(Error::InvalidConfig(format!(
            "informative block needs n >= classes >= 2 and p >= 1 (n={n}, classes={c}, p={p})"
        )));
    }
    let n_vertices = if p >= 63 { usize::MAX } else { 1usize << p };
    if n_vertices < c {
        return Err(Error::InvalidConfig(format!(
            "{p} dimensions cannot hold {c} distinct vertices"
        )));
    }
    // distinct vertex ids without replacement; for huge p sample bits directly
    let vertex_ids: Vec<u64> = if p <= 20 {
        sample(rng, n_vertices, c).into_iter().map(|v| v as u64).collect()
    } else {
        let mut ids: Vec<u64> = Vec::new();
        while ids.len() < c {
            let v = rng.random::<u64>();
            if !ids.contains(&v) {
                ids.push(v);
            }
        }
        ids
    };
    let sep = config.class_separation;
    let centroids: Vec<Vec<f64>> = vertex_ids
        .iter()
        .map(|&v| {
            (0..p)
                .map(|b| if (v >> (b % 64)) & 1 == 1 { sep } else { -sep })
                .collect()
        })
        .collect();

    let mix = match mixing {
        Mixing::Identity => Array2::eye(p),
        Mixing::Random => random_full_rank(p, rng),
    };

    let mut clean_labels = Vec::with_capacity(n);
    for class in 0..c {
        let size = n / c + usize::from(class < n % c);
        clean_labels.extend(std::iter::repeat_n(class, size));
    }
    let z = Array2::from_shape_fn((n, p), |_| StandardNormal.sample(rng));
    let mut values = z.dot(&mix);
    for (mut row, &class) in values.rows_mut().into_iter().zip(&clean_labels) {
        for (v, off) in row.iter_mut().zip(&centroids[class]) {
            *v += off;
        }
    }

    let mut labels = clean_labels.clone();
    let mut flipped = Vec::new();
    if config.label_flip_fraction > 0.0 {
        for (i, label) in labels.iter_mut().enumerate() {
            if rng.random_bool(config.label_flip_fraction) {
                let shift = rng.random_range(1..c);
                *label = (*label + shift) % c;
                flipped.push(i);
            }
        }
    }
    Ok(InformativeBlock {
        values,
        labels,
        clean_labels,
        flipped,
    })
}

fn random_full_rank(p: usize, rng: &mut Rng) -> Array2<f64> {
    loop {
        let a = Array2::from_shape_fn((p, p), |_| rng.random_range(-1.0..1.0));
        let m = DMatrix::from_fn(p, p, |i, j| a[[i, j]]);
        let sv = m.singular_values();
        let (lo, hi) = sv
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
        if hi > 0.0 && lo / hi > 1e-6 {
            return a;
        }
    }
}

fn noise(std: f64) -> Normal<f64> {
    Normal::new(0.0, std.max(0.0)).expect("finite std")
}

/// Each feature is `Σ w_p · parent_p + ε` over `n_parents` informative
/// parents drawn without replacement, `|w_p| ~ U[0.5, 1.5]` with a random
/// sign and `ε ~ N(0, noise_std²)`.
pub fn make_linear_redundant(
    informative: ArrayView2<f64>,
    count: usize,
    n_parents: usize,
    noise_std: f64,
    first_index: usize,
    rng: &mut Rng,
) -> (Array2<f64>, Vec<Lineage>) {
    let (n, p) = informative.dim();
    let n_parents = n_parents.min(p);
    let eps = noise(noise_std);
    let mut out = Array2::zeros((n, count));
    let mut lineages = Vec::with_capacity(count);
    for j in 0..count {
        let mut parents: Vec<usize> = sample(rng, p, n_parents).into_vec();
        parents.sort_unstable();
        let weights: Vec<f64> = parents
            .iter()
            .map(|_| {
                let w = rng.random_range(0.5..=1.5);
                if rng.random_bool(0.5) { w } else { -w }
            })
            .collect();
        for i in 0..n {
            let mut v: f64 = parents
                .iter()
                .zip(&weights)
                .map(|(&q, w)| w * informative[[i, q]])
                .sum();
            if noise_std > 0.0 {
                v += eps.sample(rng);
            }
            out[[i, j]] = v;
        }
        lineages.push(Lineage {
            feature: first_index + j,
            parents,
            transform: Transform::Linear { weights, noise_std },
        });
    }
    (out, lineages)
}

/// Transform plan for `count` non-linear features: the five transforms in a
/// random order, cycled when `count > 5`.
pub fn nonlinear_plan(count: usize, rng: &mut Rng) -> Vec<NonLinearKind> {
    let mut kinds = NonLinearKind::ALL.to_vec();
    kinds.shuffle(rng);
    kinds.iter().copied().cycle().take(count).collect()
}

/// One feature per entry of `plan`, applied to 1 or 2 random informative
/// parents, plus `N(0, noise_std²)` noise.
pub fn make_nonlinear_redundant(
    informative: ArrayView2<f64>,
    plan: &[NonLinearKind],
    noise_std: f64,
    first_index: usize,
    rng: &mut Rng,
) -> (Array2<f64>, Vec<Lineage>) {
    let (n, p) = informative.dim();
    let eps = noise(noise_std);
    let mut out = Array2::zeros((n, plan.len()));
    let mut lineages = Vec::with_capacity(plan.len());
    for (j, &op) in plan.iter().enumerate() {
        let parents: Vec<usize> = sample(rng, p, op.arity().min(p)).into_vec();
        for i in 0..n {
            let a = informative[[i, parents[0]]];
            let b = parents.get(1).map_or(0.0, |&q| informative[[i, q]]);
            let mut v = op.apply(a, b);
            if noise_std > 0.0 {
                v += eps.sample(rng);
            }
            out[[i, j]] = v;
        }
        lineages.push(Lineage {
            feature: first_index + j,
            parents,
            transform: Transform::NonLinear { op, noise_std },
        });
    }
    (out, lineages)
}

/// i.i.d. standard normal block.
pub fn make_gaussian_noise(n: usize, count: usize, rng: &mut Rng) -> Array2<f64> {
    Array2::from_shape_fn((n, count), |_| StandardNormal.sample(rng))
}

#[derive(Debug, Clone)]
pub struct StructuredBlock {
    pub values: Array2<f64>,
    /// Latent component of each sample, drawn independently of the labels.
    pub groups: Vec<usize>,
}

/// Gaussian mixture block whose components ignore the class labels.
///
/// Component means are `N(0, 2²)` per feature; members scatter with unit
/// variance around them.
pub fn make_structured_noise(
    n: usize,
    count: usize,
    groups: usize,
    n_classes: usize,
    rng: &mut Rng,
) -> Result<StructuredBlock> {
    check_groups(groups, n_classes)?;
    let centre = noise(2.0);
    let means = Array2::from_shape_fn((groups, count), |_| centre.sample(rng));
    let assignment: Vec<usize> = (0..n).map(|_| rng.random_range(0..groups)).collect();
    let mut values = Array2::zeros((n, count));
    for (i, &g) in assignment.iter().enumerate() {
        for j in 0..count {
            let z: f64 = StandardNormal.sample(rng);
            values[[i, j]] = means[[g, j]] + z;
        }
    }
    Ok(StructuredBlock {
        values,
        groups: assignment,
    })
}

/// Sweep feature `j` perturbs informative parent `j mod p` with noise level
/// `levels[min(j / p, levels.len() - 1)]`.
pub fn make_sweep(
    informative: ArrayView2<f64>,
    count: usize,
    levels: &[f64],
    first_index: usize,
    rng: &mut Rng,
) -> (Array2<f64>, Vec<Lineage>) {
    let (n, p) = informative.dim();
    let mut out = Array2::zeros((n, count));
    let mut lineages = Vec::with_capacity(count);
    if levels.is_empty() || p == 0 {
        return (Array2::zeros((n, 0)), lineages);
    }
    for j in 0..count {
        let parent = j % p;
        let sigma = levels[(j / p).min(levels.len() - 1)];
        for i in 0..n {
            let z: f64 = StandardNormal.sample(rng);
            out[[i, j]] = informative[[i, parent]] + sigma * z;
        }
        lineages.push(Lineage {
            feature: first_index + j,
            parents: vec![parent],
            transform: Transform::Perturb { sigma },
        });
    }
    (out, lineages)
}

fn structured_block(config: &GeneratorConfig) -> Result<Option<StructuredBlock>> {
    if config.n_structured_noise == 0 {
        return Ok(None);
    }
    make_structured_noise(
        config.n_samples,
        config.n_structured_noise,
        config.structured_noise_groups,
        config.n_classes,
        &mut derived_rng(config.master_seed, &["structured".into()]),
    )
    .map(Some)
}

/// Latent component of every sample in the structured-noise block of the
/// dataset `config` generates; empty when the block is absent.
pub fn structured_noise_groups(config: &GeneratorConfig) -> Result<Vec<usize>> {
    config.validate()?;
    Ok(structured_block(config)?.map(|b| b.groups).unwrap_or_default())
}

/// Generates the full dataset; a pure function of `config`.
pub fn generate(config: &GeneratorConfig) -> Result<SyntheticDataset> {
    config.validate()?;
    let seed = config.master_seed;
    let n = config.n_samples;

    let info = make_informative(config, Mixing::Random, &mut derived_rng(seed, &["informative".into()]))?;
    let inf = info.values.view();
    let mut offset = config.n_informative;

    let (linear, mut lineages) = make_linear_redundant(
        inf,
        config.n_linear_redundant,
        config.linear_parents,
        config.redundant_noise_std,
        offset,
        &mut derived_rng(seed, &["linear".into()]),
    );
    offset += config.n_linear_redundant;

    let mut rng = derived_rng(seed, &["nonlinear".into()]);
    let plan = nonlinear_plan(config.n_nonlinear_redundant, &mut rng);
    let (nonlinear, nl_lineages) =
        make_nonlinear_redundant(inf, &plan, config.redundant_noise_std, offset, &mut rng);
    lineages.extend(nl_lineages);
    offset += config.n_nonlinear_redundant;

    let gaussian = make_gaussian_noise(
        n,
        config.n_gaussian_noise,
        &mut derived_rng(seed, &["gaussian".into()]),
    );
    offset += config.n_gaussian_noise;

    let structured = match structured_block(config)? {
        Some(block) => block.values,
        None => Array2::zeros((n, 0)),
    };
    offset += config.n_structured_noise;

    let (sweep, sw_lineages) = make_sweep(
        inf,
        config.n_sweep,
        &config.sweep_noise_levels,
        offset,
        &mut derived_rng(seed, &["sweep".into()]),
    );
    lineages.extend(sw_lineages);

    let x = concatenate(
        Axis(1),
        &[
            inf,
            linear.view(),
            nonlinear.view(),
            gaussian.view(),
            structured.view(),
            sweep.view(),
        ],
    )
    .expect("blocks share the row count");

    Ok(SyntheticDataset {
        x,
        y: info.labels,
        kinds: config.kinds(),
        lineages,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn default_layout() {
        let ds = generate(&GeneratorConfig::default()).unwrap();
        assert_eq!(ds.x.dim(), (1000, 85));
        assert_eq!(ds.n_classes(), 3);
        let ranges = [
            (FeatureKind::Informative, 0..10),
            (FeatureKind::LinearRedundant, 10..15),
            (FeatureKind::NonLinearRedundant, 15..20),
            (FeatureKind::GaussianNoise, 20..25),
            (FeatureKind::StructuredNoise, 25..30),
            (FeatureKind::Sweep, 30..85),
        ];
        for (kind, range) in ranges {
            assert_eq!(ds.indices_of(kind), range.collect::<Vec<_>>());
        }
        assert!(ds.x.iter().all(|v| v.is_finite()));
        for class in 0..3 {
            assert!(ds.y.contains(&class));
        }
    }

    #[test]
    fn lineage_only_on_derived_features() {
        let ds = generate(&GeneratorConfig::with_seed(3)).unwrap();
        for (j, kind) in ds.kinds.iter().enumerate() {
            let lineage = ds.lineage_of(j);
            assert_eq!(lineage.is_some(), kind.has_lineage(), "feature {j}");
            if let Some(l) = lineage {
                assert!(!l.parents.is_empty());
                assert!(l.parents.iter().all(|&p| ds.kinds[p] == FeatureKind::Informative));
            }
        }
        for l in &ds.lineages {
            match &l.transform {
                Transform::Linear { weights, .. } => {
                    assert_eq!(l.parents.len(), 3);
                    assert!(weights.iter().all(|w| (0.5..=1.5).contains(&w.abs())));
                }
                Transform::NonLinear { op, .. } => assert_eq!(l.parents.len(), op.arity()),
                Transform::Perturb { .. } => assert_eq!(l.parents.len(), 1),
            }
        }
    }

    #[test]
    fn regeneration_is_bit_identical() {
        let a = generate(&GeneratorConfig::with_seed(11)).unwrap();
        let b = generate(&GeneratorConfig::with_seed(11)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = generate(&GeneratorConfig::with_seed(12)).unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn invalid_configs() {
        let cases = [
            GeneratorConfig { label_flip_fraction: 0.5, ..Default::default() },
            GeneratorConfig { label_flip_fraction: -0.1, ..Default::default() },
            GeneratorConfig { n_samples: 0, ..Default::default() },
            GeneratorConfig { redundant_noise_std: 0.0, ..Default::default() },
            GeneratorConfig { sweep_noise_levels: vec![1.0, 0.5], ..Default::default() },
            GeneratorConfig { linear_parents: 11, ..Default::default() },
        ];
        for cfg in cases {
            assert!(matches!(generate(&cfg), Err(Error::InvalidConfig(_))), "{cfg:?}");
        }
        let groups = GeneratorConfig { structured_noise_groups: 3, ..Default::default() };
        assert!(matches!(generate(&groups), Err(Error::InvalidGroups { .. })));
    }

    #[test]
    fn no_flips_keeps_clean_labels() {
        let cfg = GeneratorConfig { label_flip_fraction: 0.0, ..Default::default() };
        let block = make_informative(&cfg, Mixing::Random, &mut rng_from_seed(1)).unwrap();
        assert_eq!(block.labels, block.clean_labels);
        assert!(block.flipped.is_empty());
    }

    #[test]
    fn flip_count_is_binomial() {
        let cfg = GeneratorConfig::default();
        let block = make_informative(&cfg, Mixing::Random, &mut rng_from_seed(2)).unwrap();
        assert!((30..=70).contains(&block.flipped.len()), "{}", block.flipped.len());
        for &i in &block.flipped {
            assert_ne!(block.labels[i], block.clean_labels[i]);
        }
    }

    #[test]
    fn identity_mixing_keeps_covariance_diagonal() {
        let cfg = GeneratorConfig { label_flip_fraction: 0.0, ..Default::default() };
        let block = make_informative(&cfg, Mixing::Identity, &mut rng_from_seed(3)).unwrap();
        // within-class covariance is I up to sampling error
        let rows: Vec<usize> = (0..1000).filter(|&i| block.labels[i] == 0).collect();
        let sub = block.values.select(Axis(0), &rows);
        let mean = sub.mean_axis(Axis(0)).unwrap();
        let c = &sub - &mean;
        let cov = c.t().dot(&c) / (rows.len() as f64 - 1.0);
        for i in 0..10 {
            assert!((cov[[i, i]] - 1.0).abs() < 0.25);
            for j in 0..10 {
                if i != j {
                    assert!(cov[[i, j]].abs() < 0.2, "cov[{i},{j}] = {}", cov[[i, j]]);
                }
            }
        }
    }

    #[test]
    fn zero_noise_square_is_exact() {
        let inf = Array2::from_shape_fn((20, 3), |(i, j)| i as f64 - 3.0 * j as f64);
        let (out, lin) = make_nonlinear_redundant(
            inf.view(),
            &[NonLinearKind::Square, NonLinearKind::Product],
            0.0,
            7,
            &mut rng_from_seed(0),
        );
        let p = lin[0].parents[0];
        for i in 0..20 {
            assert_eq!(out[[i, 0]], inf[[i, p]] * inf[[i, p]]);
        }
        assert_eq!(lin[1].parents.len(), 2);
        assert_eq!(lin[0].feature, 7);
    }

    #[test]
    fn zero_sigma_sweep_copies_parent() {
        let inf = Array2::from_shape_fn((10, 2), |(i, j)| (i * (j + 1)) as f64);
        let (out, lin) = make_sweep(inf.view(), 4, &[0.0], 0, &mut rng_from_seed(0));
        for j in 0..4 {
            assert_eq!(lin[j].parents, vec![j % 2]);
            assert_eq!(out.column(j), inf.column(j % 2));
        }
    }

    #[test]
    fn empty_noise_block_and_bad_groups() {
        let mut rng = rng_from_seed(0);
        assert_eq!(make_gaussian_noise(10, 0, &mut rng).dim(), (10, 0));
        assert!(matches!(
            make_structured_noise(10, 5, 3, 3, &mut rng),
            Err(Error::InvalidGroups { .. })
        ));
        assert!(make_structured_noise(10, 5, 1, 3, &mut rng).is_err());
    }
}
