use rand::seq::index::sample;
use rand::Rng as _;

use super::config::InitStrategy;
use crate::error::{Error, Result};
use crate::seed::Rng;
use crate::subset::FeatureSubset;

/// Sets one uniformly random bit on an empty subset.
pub fn repair(subset: &mut FeatureSubset, rng: &mut Rng) {
    if subset.is_empty() && subset.dimension() > 0 {
        let i = rng.random_range(0..subset.dimension());
        subset.set(i, true);
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("init probability {p} outside (0, 1)")))
    }
}

pub fn init_binary_random(pop_size: usize, d: usize, p: f64, rng: &mut Rng) -> Result<Vec<FeatureSubset>> {
    check_p(p)?;
    Ok((0..pop_size)
        .map(|_| {
            let mut s = FeatureSubset::new((0..d).map(|_| rng.random_bool(p)).collect());
            repair(&mut s, rng);
            s
        })
        .collect())
}

/// Segment sizes as equal as possible, larger segments first.
pub fn segment_sizes(pop_size: usize, segments: usize) -> Vec<usize> {
    let base = pop_size / segments;
    let extra = pop_size % segments;
    (0..segments).map(|s| base + usize::from(s < extra)).collect()
}

pub fn init_segmented(pop_size: usize, d: usize, p_list: &[f64], rng: &mut Rng) -> Result<Vec<FeatureSubset>> {
    if p_list.is_empty() {
        return Err(Error::InvalidConfig("segmented init needs at least one p".into()));
    }
    p_list.iter().try_for_each(|&p| check_p(p))?;
    let mut out = Vec::with_capacity(pop_size);
    for (size, &p) in segment_sizes(pop_size, p_list.len()).into_iter().zip(p_list) {
        out.extend(init_binary_random(size, d, p, rng)?);
    }
    Ok(out)
}

pub fn init_fixed_cardinality(pop_size: usize, d: usize, k: usize, rng: &mut Rng) -> Result<Vec<FeatureSubset>> {
    if k == 0 || k > d {
        return Err(Error::InvalidK { k, n: d });
    }
    Ok((0..pop_size)
        .map(|_| FeatureSubset::from_indices(d, sample(rng, d, k)))
        .collect())
}

pub fn initialise(strategy: &InitStrategy, pop_size: usize, d: usize, rng: &mut Rng) -> Result<Vec<FeatureSubset>> {
    match strategy {
        InitStrategy::BinaryRandom { p } => init_binary_random(pop_size, d, *p, rng),
        InitStrategy::Segmented { p_list } => init_segmented(pop_size, d, p_list, rng),
        InitStrategy::FixedCardinality { k } => init_fixed_cardinality(pop_size, d, *k, rng),
    }
}
