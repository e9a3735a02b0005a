//! Tournament-based variation and hypervolume-driven survival.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::config::ReferencePointMode;
use super::hypervolume::hv_contribution_2d;
use super::init::repair;
use super::sort::{front_ranks, non_dominated_sort};
use crate::objectives::ObjectiveVector;
use crate::seed::Rng;
use crate::subset::FeatureSubset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub subset: FeatureSubset,
    pub objectives: ObjectiveVector,
    pub birth_generation: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variation {
    pub crossover_probability: f64,
    pub mutation_rate: f64,
}

/// Min-max scaling of both coordinates over `points`; a constant coordinate
/// maps to 0.
fn normalise(points: &[ObjectiveVector]) -> Vec<ObjectiveVector> {
    let lo = |f: fn(&ObjectiveVector) -> f64| points.iter().map(f).fold(f64::INFINITY, f64::min);
    let hi = |f: fn(&ObjectiveVector) -> f64| points.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let (lo1, hi1) = (lo(|p| p.f1), hi(|p| p.f1));
    let (lo2, hi2) = (lo(|p| p.f2), hi(|p| p.f2));
    let scale = |v: f64, lo: f64, hi: f64| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
    points
        .iter()
        .map(|p| ObjectiveVector::new(scale(p.f1, lo1, hi1), scale(p.f2, lo2, hi2)))
        .collect()
}

/// Hypervolume contribution of each member of `front` within that front,
/// under the survival reference-point rule.
pub fn front_contributions(
    points: &[ObjectiveVector],
    front: &[usize],
    mode: &ReferencePointMode,
) -> Vec<f64> {
    match *mode {
        ReferencePointMode::Fixed { f1, f2 } => {
            let members: Vec<ObjectiveVector> = front.iter().map(|&i| points[i]).collect();
            hv_contribution_2d(&members, ObjectiveVector::new(f1, f2))
        }
        ReferencePointMode::Dynamic => {
            let scaled = normalise(points);
            let members: Vec<ObjectiveVector> = front.iter().map(|&i| scaled[i]).collect();
            let worst = |f: fn(&ObjectiveVector) -> f64| members.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
            let reference = ObjectiveVector::new(worst(|p| p.f1) + 1.0, worst(|p| p.f2) + 1.0);
            hv_contribution_2d(&members, reference)
        }
    }
}

/// Front rank and within-front contribution of every point.
pub fn rank_and_contribution(points: &[ObjectiveVector], mode: &ReferencePointMode) -> (Vec<usize>, Vec<f64>) {
    let fronts = non_dominated_sort(points);
    let ranks = front_ranks(&fronts, points.len());
    let mut contrib = vec![0.0; points.len()];
    for front in &fronts {
        for (&i, c) in front.iter().zip(front_contributions(points, front, mode)) {
            contrib[i] = c;
        }
    }
    (ranks, contrib)
}

fn tournament(ranks: &[usize], contrib: &[f64], rng: &mut Rng) -> usize {
    let n = ranks.len();
    let a = rng.random_range(0..n);
    if n == 1 {
        return a;
    }
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    if ranks[a] != ranks[b] {
        return if ranks[a] < ranks[b] { a } else { b };
    }
    if contrib[a] != contrib[b] {
        return if contrib[a] > contrib[b] { a } else { b };
    }
    if rng.random_bool(0.5) {
        a
    } else {
        b
    }
}

/// Uniform crossover (or a copy of parent 1) followed by bit-flip mutation.
pub fn vary(p1: &FeatureSubset, p2: &FeatureSubset, variation: &Variation, rng: &mut Rng) -> FeatureSubset {
    let mut child = if rng.random_bool(variation.crossover_probability) {
        FeatureSubset::new(
            p1.bits()
                .iter()
                .zip(p2.bits())
                .map(|(&a, &b)| if rng.random_bool(0.5) { a } else { b })
                .collect(),
        )
    } else {
        p1.clone()
    };
    for i in 0..child.dimension() {
        if rng.random_bool(variation.mutation_rate) {
            child.flip(i);
        }
    }
    repair(&mut child, rng);
    child
}

/// One offspring from two binary-tournament parents.
pub fn make_offspring(
    population: &[Individual],
    variation: &Variation,
    mode: &ReferencePointMode,
    rng: &mut Rng,
) -> FeatureSubset {
    let points: Vec<ObjectiveVector> = population.iter().map(|m| m.objectives).collect();
    let (ranks, contrib) = rank_and_contribution(&points, mode);
    let a = tournament(&ranks, &contrib, rng);
    let b = tournament(&ranks, &contrib, rng);
    vary(&population[a].subset, &population[b].subset, variation, rng)
}

/// Index of the member to discard: the smallest contributor of the last
/// front, ties broken at random.
pub fn survival_victim(points: &[ObjectiveVector], mode: &ReferencePointMode, rng: &mut Rng) -> usize {
    let fronts = non_dominated_sort(points);
    let last = fronts.last().expect("non-empty population");
    if last.len() == 1 {
        return last[0];
    }
    let contrib = front_contributions(points, last, mode);
    let min = contrib.iter().copied().fold(f64::INFINITY, f64::min);
    let tied: Vec<usize> = last
        .iter()
        .zip(&contrib)
        .filter(|(_, &c)| c == min)
        .map(|(&i, _)| i)
        .collect();
    if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.random_range(0..tied.len())]
    }
}

/// Removes one member of `population` (size restored after adding an
/// offspring) and returns it.
pub fn survival_select(population: &mut Vec<Individual>, mode: &ReferencePointMode, rng: &mut Rng) -> Individual {
    let points: Vec<ObjectiveVector> = population.iter().map(|m| m.objectives).collect();
    let victim = survival_victim(&points, mode, rng);
    population.remove(victim)
}
