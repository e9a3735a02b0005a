mod common;

use std::sync::Arc;

use common::{brute_fronts, default_data, grid_hypervolume};
use mofs::moea::{
    hv_contribution_2d, hypervolume_2d, init_binary_random, init_fixed_cardinality, init_segmented,
    non_dominated_sort, run, survival_select, vary, Individual, InitStrategy, MoeaConfig, ReferencePointMode,
    Variation,
};
use mofs::objectives::{Evaluation, EvaluationContext, Evaluator, ObjectiveParams, ObjectiveSpec, ObjectiveVector, SizeDirection};
use mofs::seed::rng_from_seed;
use mofs::FeatureSubset;
use rand::Rng;

fn v(f1: f64, f2: f64) -> ObjectiveVector {
    ObjectiveVector::new(f1, f2)
}

fn lattice_points(rng: &mut impl Rng, n: usize) -> Vec<ObjectiveVector> {
    (0..n)
        .map(|_| v(rng.random_range(0..100) as f64 / 100.0, rng.random_range(0..100) as f64 / 100.0))
        .collect()
}

#[test]
fn hypervolume_worked_examples() {
    assert_eq!(hypervolume_2d(&[v(2.0, 2.0)], v(4.0, 4.0)), 4.0);
    let stair = [v(1.0, 3.0), v(2.0, 2.0), v(3.0, 1.0)];
    assert_eq!(hypervolume_2d(&stair, v(4.0, 4.0)), 6.0);
    assert_eq!(hv_contribution_2d(&stair, v(4.0, 4.0)), vec![1.0, 1.0, 1.0]);
    assert_eq!(hv_contribution_2d(&[v(2.0, 2.0), v(3.0, 3.0)], v(4.0, 4.0))[1], 0.0);
}

#[test]
fn hypervolume_matches_grid_oracle() {
    let mut rng = rng_from_seed(1);
    let reference = v(1.0, 1.0);
    for _ in 0..50 {
        let n = rng.random_range(1..=8);
        let pts = lattice_points(&mut rng, n);
        let (total, exclusive) = grid_hypervolume(&pts, reference, 0.0, 1000);
        let hv = hypervolume_2d(&pts, reference);
        assert!((hv - total).abs() <= 1e-3 * total.max(1e-12), "{hv} vs {total}");
        for (c, e) in hv_contribution_2d(&pts, reference).iter().zip(&exclusive) {
            assert!((c - e).abs() <= 1e-3 * total.max(1e-12), "{pts:?} {c} {e}");
        }
    }
}

#[test]
fn sorting_matches_brute_force() {
    let mut rng = rng_from_seed(2);
    for _ in 0..50 {
        let pts = lattice_points(&mut rng, 50);
        assert_eq!(non_dominated_sort(&pts), brute_fronts(&pts));
    }
    let dup = [v(1.0, 1.0), v(1.0, 1.0), v(2.0, 0.5)];
    assert_eq!(non_dominated_sort(&dup), vec![vec![2, 0, 1]]);
}

#[test]
fn dominance_survives_size_sign_flip() {
    let mut rng = rng_from_seed(3);
    for _ in 0..100 {
        let p = lattice_points(&mut rng, 2);
        let (a, b) = (p[0], p[1]);
        // maximising -f2 is the same order as minimising f2
        let flipped = |x: ObjectiveVector, y: ObjectiveVector| {
            x.f1 <= y.f1 && -x.f2 >= -y.f2 && (x.f1 < y.f1 || -x.f2 > -y.f2)
        };
        assert_eq!(a.dominates(&b), flipped(a, b));
        assert_eq!(b.dominates(&a), flipped(b, a));
    }
}

#[test]
fn survival_keeps_best_single_removal() {
    let mut rng = rng_from_seed(4);
    let reference = v(1.0, 1.0);
    let mode = ReferencePointMode::fixed(reference);
    for _ in 0..100 {
        let pts = lattice_points(&mut rng, 8);
        let mut pop: Vec<Individual> = pts
            .iter()
            .enumerate()
            .map(|(i, &o)| Individual {
                subset: FeatureSubset::from_indices(8, [i]),
                objectives: o,
                birth_generation: 0,
            })
            .collect();
        let best = (0..8)
            .map(|r| {
                let rest: Vec<ObjectiveVector> = pts.iter().enumerate().filter(|(i, _)| *i != r).map(|(_, p)| *p).collect();
                hypervolume_2d(&rest, reference)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        survival_select(&mut pop, &mode, &mut rng);
        assert_eq!(pop.len(), 7);
        let kept: Vec<ObjectiveVector> = pop.iter().map(|m| m.objectives).collect();
        assert!((hypervolume_2d(&kept, reference) - best).abs() < 1e-12);
    }
}

#[test]
fn mutation_flips_bits_at_the_configured_rate() {
    let d = 85;
    let parent = FeatureSubset::from_indices(d, (0..d).step_by(2));
    let variation = Variation {
        crossover_probability: 0.0,
        mutation_rate: 1.0 / d as f64,
    };
    let mut rng = rng_from_seed(5);
    let n = 10_000;
    let mut flips = 0usize;
    for _ in 0..n {
        let child = vary(&parent, &parent, &variation, &mut rng);
        flips += child.bits().iter().zip(parent.bits()).filter(|(a, b)| a != b).count();
    }
    let trials = (n * d) as f64;
    let p = 1.0 / d as f64;
    let se = (trials * p * (1.0 - p)).sqrt();
    assert!((flips as f64 - trials * p).abs() <= 3.0 * se, "{flips}");

    let off = Variation {
        crossover_probability: 0.0,
        mutation_rate: 0.0,
    };
    let other = FeatureSubset::full(d);
    assert_eq!(vary(&parent, &other, &off, &mut rng), parent);
}

#[test]
fn initialisers_follow_their_distributions() {
    let mut rng = rng_from_seed(6);
    let pop = init_binary_random(50, 85, 0.5, &mut rng).unwrap();
    let mean = pop.iter().map(|s| s.cardinality()).sum::<usize>() as f64 / 50.0;
    assert!(mean > 38.0 && mean < 47.0);

    let seg = init_segmented(50, 85, &[0.25, 0.5, 0.75], &mut rng).unwrap();
    let means: Vec<f64> = [(0, 17), (17, 34), (34, 50)]
        .iter()
        .map(|&(a, b)| seg[a..b].iter().map(|s| s.cardinality()).sum::<usize>() as f64 / (b - a) as f64)
        .collect();
    for (m, want) in means.iter().zip([21.25, 42.5, 63.75]) {
        assert!((m - want).abs() < 4.0, "{means:?}");
    }

    let ones = init_fixed_cardinality(50, 85, 1, &mut rng).unwrap();
    assert!(ones.iter().all(|s| s.cardinality() == 1));
    let pairs = init_fixed_cardinality(50, 85, 2, &mut rng).unwrap();
    assert!(pairs.iter().any(|s| *s != pairs[0]));
    assert!(init_fixed_cardinality(5, 85, 86, &mut rng).is_err());
}

#[test]
fn accuracy_front_from_single_features_spans_sizes() {
    let ctx = EvaluationContext::from_split(&default_data().1, ObjectiveParams::default(), 1).unwrap();
    let evaluator = Evaluator::new(Arc::new(ctx));
    let config = MoeaConfig {
        init: InitStrategy::FixedCardinality { k: 1 },
        master_seed: 1,
        ..Default::default()
    };
    let spec = ObjectiveSpec::new(Evaluation::Accuracy, SizeDirection::MinimiseSize);
    let history = run(spec, &evaluator, &config).unwrap();
    assert_eq!(history.snapshots.len(), 51);
    assert!(history.evaluations <= config.evaluation_budget());
    let last = &history.final_snapshot().members;
    let pts: Vec<ObjectiveVector> = last.iter().map(|m| m.objectives).collect();
    let front = &non_dominated_sort(&pts)[0];
    for &i in front {
        assert!(!front.iter().any(|&j| pts[j].dominates(&pts[i])));
    }
    let sizes: Vec<usize> = front.iter().map(|&i| last[i].subset.cardinality()).collect();
    assert_eq!(sizes.iter().min(), Some(&1));
    assert!(*sizes.iter().max().unwrap() >= 8, "{sizes:?}");
}
