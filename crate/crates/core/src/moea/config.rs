use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::ObjectiveVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitStrategy {
    BinaryRandom { p: f64 },
    Segmented { p_list: Vec<f64> },
    FixedCardinality { k: usize },
}

impl InitStrategy {
    pub fn default_segmented() -> Self {
        InitStrategy::Segmented {
            p_list: vec![0.25, 0.5, 0.75],
        }
    }

    /// Short name used on the command line and in report tables.
    pub fn name(&self) -> &'static str {
        match self {
            InitStrategy::BinaryRandom { .. } => "random",
            InitStrategy::Segmented { .. } => "segmented",
            InitStrategy::FixedCardinality { .. } => "fixed",
        }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        let check_p = |p: f64| {
            if p > 0.0 && p < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("init probability {p} outside (0, 1)")))
            }
        };
        match self {
            InitStrategy::BinaryRandom { p } => check_p(*p),
            InitStrategy::Segmented { p_list } => {
                if p_list.is_empty() {
                    return Err(Error::InvalidConfig("segmented init needs at least one p".into()));
                }
                p_list.iter().try_for_each(|&p| check_p(p))
            }
            InitStrategy::FixedCardinality { k } => {
                if *k == 0 || *k > d {
                    Err(Error::InvalidK { k: *k, n: d })
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for InitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitStrategy::BinaryRandom { p } => write!(f, "random(p={p})"),
            InitStrategy::Segmented { p_list } => {
                let ps: Vec<String> = p_list.iter().map(|p| p.to_string()).collect();
                write!(f, "segmented(p={})", ps.join("/"))
            }
            InitStrategy::FixedCardinality { k } => write!(f, "fixed(k={k})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ReferencePointMode {
    /// Min-max normalise the combined population and place the reference one
    /// unit beyond the worst point of the front under consideration.
    Dynamic,
    Fixed { f1: f64, f2: f64 },
}

impl ReferencePointMode {
    pub fn fixed(reference: ObjectiveVector) -> Self {
        ReferencePointMode::Fixed {
            f1: reference.f1,
            f2: reference.f2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoeaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub init: InitStrategy,
    pub crossover_probability: f64,
    /// Per-bit flip rate; `None` means `1/d`.
    pub mutation_rate: Option<f64>,
    pub reference_point_mode: ReferencePointMode,
    pub master_seed: u64,
}

impl Default for MoeaConfig {
    fn default() -> Self {
        MoeaConfig {
            population_size: 50,
            generations: 50,
            init: InitStrategy::BinaryRandom { p: 0.5 },
            crossover_probability: 0.9,
            mutation_rate: None,
            reference_point_mode: ReferencePointMode::Dynamic,
            master_seed: 0,
        }
    }
}

impl MoeaConfig {
    pub fn validate(&self, d: usize) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "population_size = {} (need at least 2)",
                self.population_size
            )));
        }
        let rate_ok = |r: f64| (0.0..=1.0).contains(&r);
        if !rate_ok(self.crossover_probability) {
            return Err(Error::InvalidConfig(format!(
                "crossover_probability = {} outside [0, 1]",
                self.crossover_probability
            )));
        }
        if let Some(r) = self.mutation_rate {
            if !rate_ok(r) {
                return Err(Error::InvalidConfig(format!("mutation_rate = {r} outside [0, 1]")));
            }
        }
        if let ReferencePointMode::Fixed { f1, f2 } = self.reference_point_mode {
            if !(f1.is_finite() && f2.is_finite()) {
                return Err(Error::InvalidConfig("fixed reference point must be finite".into()));
            }
        }
        self.init.validate(d)
    }

    pub fn mutation_rate_for(&self, d: usize) -> f64 {
        self.mutation_rate.unwrap_or(1.0 / d as f64)
    }

    /// Upper bound on fresh evaluations for one run.
    pub fn evaluation_budget(&self) -> usize {
        self.population_size * (self.generations + 1)
    }
}
