use super::config::MoeaConfig;
use super::hypervolume::hypervolume_2d;
use super::init::initialise;
use super::select::{make_offspring, survival_select, Individual, Variation};
use crate::error::{Error, Result};
use crate::objectives::{Evaluator, ObjectiveParams, ObjectiveSpec, ObjectiveVector};
use crate::seed::derived_rng;

/// Population after initialisation (generation 0) or after a generation.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub generation: usize,
    /// Cumulative fresh evaluations when the snapshot was taken.
    pub evaluations: usize,
    pub members: Vec<Individual>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunHistory {
    pub spec: ObjectiveSpec,
    pub config: MoeaConfig,
    pub params: ObjectiveParams,
    /// Seed of the objective evaluations (forest and k-means streams).
    pub objective_seed: u64,
    pub n_features: usize,
    pub dataset_fingerprint: Option<String>,
    pub snapshots: Vec<Snapshot>,
    /// Population hypervolume after initialisation and after every step.
    pub hv_trace: Vec<f64>,
    /// Reference point of `hv_trace`: the fixed one when configured,
    /// otherwise the objectives' worst attainable values.
    pub trace_reference: ObjectiveVector,
    pub evaluations: usize,
    pub cache_hits: usize,
}

impl RunHistory {
    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("history holds the initial population")
    }

    pub fn with_fingerprint(mut self, fingerprint: impl Into<String>) -> Self {
        self.dataset_fingerprint = Some(fingerprint.into());
        self
    }
}

struct Counter<'a> {
    evaluator: &'a Evaluator,
    spec: ObjectiveSpec,
    fresh: usize,
    hits: usize,
    budget: usize,
}

impl Counter<'_> {
    fn evaluate(&mut self, subset: &crate::subset::FeatureSubset) -> Result<ObjectiveVector> {
        let e = self.evaluator.evaluate(subset, self.spec)?;
        if e.cache_hit {
            self.hits += 1;
        } else {
            self.fresh += 1;
            if self.fresh > self.budget {
                return Err(Error::BudgetExceeded {
                    used: self.fresh,
                    budget: self.budget,
                });
            }
        }
        Ok(e.value)
    }
}

/// Steady-state SMS-EMOA: each generation is `population_size` steps of one
/// offspring followed by one removal.
pub fn run(spec: ObjectiveSpec, evaluator: &Evaluator, config: &MoeaConfig) -> Result<RunHistory> {
    let ctx = evaluator.context();
    let d = ctx.n_features();
    config.validate(d)?;
    let mode = config.reference_point_mode;
    let trace_reference = match mode {
        super::ReferencePointMode::Fixed { f1, f2 } => ObjectiveVector::new(f1, f2),
        super::ReferencePointMode::Dynamic => ctx.reference_point(spec),
    };
    let variation = Variation {
        crossover_probability: config.crossover_probability,
        mutation_rate: config.mutation_rate_for(d),
    };
    let mut rng = derived_rng(config.master_seed, &["moea".into()]);
    let mut counter = Counter {
        evaluator,
        spec,
        fresh: 0,
        hits: 0,
        budget: config.evaluation_budget(),
    };

    let mut population = Vec::with_capacity(config.population_size + 1);
    for subset in initialise(&config.init, config.population_size, d, &mut rng)? {
        let objectives = counter.evaluate(&subset)?;
        population.push(Individual {
            subset,
            objectives,
            birth_generation: 0,
        });
    }
    let hv = |pop: &[Individual]| {
        let pts: Vec<ObjectiveVector> = pop.iter().map(|m| m.objectives).collect();
        hypervolume_2d(&pts, trace_reference)
    };
    let mut snapshots = vec![Snapshot {
        generation: 0,
        evaluations: counter.fresh,
        members: population.clone(),
    }];
    let mut hv_trace = vec![hv(&population)];

    for generation in 1..=config.generations {
        for _ in 0..config.population_size {
            let subset = make_offspring(&population, &variation, &mode, &mut rng);
            let objectives = counter.evaluate(&subset)?;
            population.push(Individual {
                subset,
                objectives,
                birth_generation: generation,
            });
            survival_select(&mut population, &mode, &mut rng);
            hv_trace.push(hv(&population));
        }
        snapshots.push(Snapshot {
            generation,
            evaluations: counter.fresh,
            members: population.clone(),
        });
    }

    Ok(RunHistory {
        spec,
        config: config.clone(),
        params: ctx.params.clone(),
        objective_seed: ctx.master_seed,
        n_features: d,
        dataset_fingerprint: None,
        snapshots,
        hv_trace,
        trace_reference,
        evaluations: counter.fresh,
        cache_hits: counter.hits,
    })
}
