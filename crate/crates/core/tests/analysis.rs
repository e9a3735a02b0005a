mod common;

use std::collections::BTreeMap;

use common::{brute_fronts, default_data};
use mofs::analysis::{
    cluster_solutions, compare_to_ground_truth, composition_report, cross_formulation_table, evaluate_test_accuracy,
    extract_front, lineage_coverage, naive_subset, test_accuracy, test_seed, DominationStatus, ParetoRecord,
};
use mofs::dataset::FeatureKind;
use mofs::mlcore::ForestConfig;
use mofs::moea::{Individual, MoeaConfig, RunHistory, Snapshot};
use mofs::objectives::{
    Evaluation, EvaluationContext, ObjectiveParams, ObjectiveSpec, ObjectiveVector, SizeDirection,
};
use mofs::seed::rng_from_seed;
use mofs::FeatureSubset;
use rand::Rng;

fn history_of(members: Vec<Individual>, d: usize) -> RunHistory {
    RunHistory {
        spec: ObjectiveSpec::new(Evaluation::PcaLoss, SizeDirection::MinimiseSize),
        config: MoeaConfig::default(),
        params: ObjectiveParams::default(),
        objective_seed: 0,
        n_features: d,
        dataset_fingerprint: None,
        snapshots: vec![Snapshot {
            generation: 0,
            evaluations: members.len(),
            members,
        }],
        hv_trace: Vec::new(),
        trace_reference: ObjectiveVector::new(1.0, d as f64 + 1.0),
        evaluations: 0,
        cache_hits: 0,
    }
}

fn random_mask(rng: &mut impl Rng, d: usize) -> FeatureSubset {
    let mut s = FeatureSubset::from_indices(d, (0..d).filter(|_| rng.random_bool(0.4)));
    if s.is_empty() {
        s.set(rng.random_range(0..d), true);
    }
    s
}

#[test]
fn extract_front_matches_brute_force_filter() {
    let mut rng = rng_from_seed(1);
    for _ in 0..50 {
        // objectives are a function of the mask, as in a real run
        let pool: Vec<(FeatureSubset, ObjectiveVector)> = (0..15)
            .map(|_| {
                let s = random_mask(&mut rng, 6);
                let code: usize = s.indices().iter().map(|i| 1 << i).sum();
                let o = ObjectiveVector::new((code * 7 % 10) as f64 / 10.0, s.cardinality() as f64);
                (s, o)
            })
            .collect();
        let members: Vec<Individual> = (0..30)
            .map(|_| {
                let (s, o) = pool[rng.random_range(0..pool.len())].clone();
                Individual {
                    subset: s,
                    objectives: o,
                    birth_generation: 0,
                }
            })
            .collect();
        let history = history_of(members.clone(), 6);
        let front = extract_front(&history);

        let points: Vec<ObjectiveVector> = members.iter().map(|m| m.objectives).collect();
        let mut expect: Vec<FeatureSubset> = brute_fronts(&points)[0].iter().map(|&i| members[i].subset.clone()).collect();
        expect.sort();
        expect.dedup();
        let mut got: Vec<FeatureSubset> = front.iter().map(|r| r.subset.clone()).collect();
        got.sort();
        assert_eq!(got, expect);
        for w in front.windows(2) {
            assert!(w[0].f2 <= w[1].f2);
        }
    }
}

/// Plain average linkage recomputed from scratch each step.
fn brute_linkage_groups(masks: &[FeatureSubset], k: usize) -> (Vec<f64>, Vec<Vec<usize>>) {
    let mut clusters: Vec<Vec<usize>> = (0..masks.len()).map(|i| vec![i]).collect();
    let mut distances = Vec::new();
    let mut groups_at_k = None;
    while clusters.len() > 1 {
        if clusters.len() == k {
            groups_at_k = Some(clusters.clone());
        }
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in 0..clusters.len() {
                let (la, lb) = (clusters[a][0], clusters[b][0]);
                if lb <= la {
                    continue;
                }
                let mut total = 0.0;
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        total += masks[i].jaccard_distance(&masks[j]);
                    }
                }
                let dist = total / (clusters[a].len() * clusters[b].len()) as f64;
                let better = match best {
                    None => true,
                    Some((bd, bla, blb, _, _)) => dist < bd - 1e-12 || ((dist - bd).abs() <= 1e-12 && (la, lb) < (bla, blb)),
                };
                if better {
                    best = Some((dist, la, lb, a, b));
                }
            }
        }
        let (dist, _, _, a, b) = best.unwrap();
        distances.push(dist);
        let moved = clusters.remove(b);
        let target = if b < a { a - 1 } else { a };
        clusters[target].extend(moved);
        clusters[target].sort();
        clusters.sort_by_key(|c| c[0]);
    }
    if k == 1 {
        groups_at_k = Some(clusters);
    }
    (distances, groups_at_k.unwrap())
}

#[test]
fn clustering_matches_brute_force_linkage() {
    let mut rng = rng_from_seed(2);
    for _ in 0..20 {
        let mut masks: Vec<FeatureSubset> = (0..12).map(|_| random_mask(&mut rng, 10)).collect();
        masks.sort();
        masks.dedup();
        let records: Vec<ParetoRecord> = masks
            .iter()
            .rev()
            .map(|m| ParetoRecord::new(m.clone(), ObjectiveVector::new(0.0, 0.0)))
            .collect();
        let k = 4.min(masks.len());
        let c = cluster_solutions(&records, k).unwrap();
        assert_eq!(c.leaves, masks);
        let (distances, groups) = brute_linkage_groups(&masks, k);
        for (m, d) in c.linkage.iter().zip(&distances) {
            assert!((m.distance - d).abs() < 1e-12);
        }
        for g in &groups {
            let label = &c.leaf_labels[g[0]];
            assert!(g.iter().all(|&i| &c.leaf_labels[i] == label));
        }
        let distinct: std::collections::BTreeSet<&String> = c.leaf_labels.iter().collect();
        assert_eq!(distinct.len(), k);
        // labels follow the masks, not the record order
        let shuffled: Vec<ParetoRecord> = records.iter().rev().cloned().collect();
        let again = cluster_solutions(&shuffled, k).unwrap();
        assert_eq!(again.leaf_labels, c.leaf_labels);
    }
}

#[test]
fn clustering_degenerate_inputs() {
    let same = vec![ParetoRecord::new(FeatureSubset::full(4), ObjectiveVector::new(0.0, 4.0)); 3];
    assert!(cluster_solutions(&same, 2).is_err());
    let one = cluster_solutions(&same, 1).unwrap();
    assert!(one.labels.iter().all(|l| l == "C1"));
}

#[test]
fn lineage_coverage_rules() {
    let (ds, _) = default_data();
    assert_eq!(lineage_coverage(&FeatureSubset::from_indices(85, 0..10), ds), 1.0);
    assert_eq!(lineage_coverage(&FeatureSubset::from_indices(85, 20..30), ds), 0.0);
    let sweep_of_first = (30..85).find(|&j| ds.lineage_of(j).unwrap().parents == [0]).unwrap();
    assert_eq!(lineage_coverage(&FeatureSubset::from_indices(85, [sweep_of_first]), ds), 0.1);

    let mut rng = rng_from_seed(3);
    for _ in 0..50 {
        let mut s = FeatureSubset::from_indices(85, (0..85).filter(|_| rng.random_bool(0.05)));
        let before = lineage_coverage(&s, ds);
        s.set(rng.random_range(0..85), true);
        assert!(lineage_coverage(&s, ds) >= before);
    }
}

#[test]
fn composition_rows_sum_to_cardinality() {
    let (ds, _) = default_data();
    let mut rng = rng_from_seed(4);
    let records: Vec<ParetoRecord> = (0..10)
        .map(|_| {
            let s = random_mask(&mut rng, 85);
            let c = s.cardinality() as f64;
            ParetoRecord::new(s, ObjectiveVector::new(0.0, c))
        })
        .collect();
    let clustering = cluster_solutions(&records, 4).unwrap();
    let matrix = composition_report(&records, &clustering, &ds.kinds);
    for (row, &r) in matrix.rows.iter().zip(&matrix.row_records) {
        assert_eq!(row.iter().filter(|&&b| b).count(), records[r].subset.cardinality());
    }
    let total: usize = matrix.clusters.iter().map(|c| c.n_solutions).sum();
    assert_eq!(total, 10);

    let naive = ParetoRecord::new(naive_subset(&ds.kinds), ObjectiveVector::new(0.0, 10.0));
    let noise = ParetoRecord::new(FeatureSubset::from_indices(85, [20]), ObjectiveVector::new(0.0, 1.0));
    let pair = vec![naive, noise];
    let m = composition_report(&pair, &cluster_solutions(&pair, 2).unwrap(), &ds.kinds);
    let counts: Vec<&BTreeMap<FeatureKind, usize>> = m.clusters.iter().map(|c| &c.kind_counts).collect();
    assert!(counts.iter().any(|c| c.get(&FeatureKind::Informative) == Some(&10) && c.values().sum::<usize>() == 10));
    assert!(counts.iter().any(|c| c.get(&FeatureKind::GaussianNoise) == Some(&1) && c.values().sum::<usize>() == 1));
}

#[test]
fn held_out_accuracy_oracles() {
    let (_, split) = default_data();
    let forest = ForestConfig::default();
    let naive = FeatureSubset::from_indices(85, 0..10);
    assert!(test_accuracy(&naive, split, &forest, test_seed(0, &naive)).unwrap() >= 0.6);
    let noise = FeatureSubset::from_indices(85, [21]);
    let acc = test_accuracy(&noise, split, &forest, test_seed(0, &noise)).unwrap();
    assert!(acc > 0.20 && acc < 0.47, "{acc}");

    let mut constant = split.clone();
    constant.train.y.iter_mut().for_each(|y| *y = 0);
    constant.test.y.iter_mut().for_each(|y| *y = 0);
    let relaxed = ForestConfig {
        allow_single_class: true,
        ..Default::default()
    };
    assert_eq!(test_accuracy(&naive, &constant, &relaxed, 5).unwrap(), 1.0);
}

#[test]
fn ground_truth_comparison_and_recomputed_deltas() {
    let (ds, split) = default_data();
    let spec = ObjectiveSpec::new(Evaluation::PcaLoss, SizeDirection::MinimiseSize);
    let ctx = EvaluationContext::from_split(split, ObjectiveParams::default(), 0).unwrap();
    let forest = ForestConfig::default();
    let naive = naive_subset(&ds.kinds);
    let naive_obj = mofs::objectives::evaluate(&naive, spec, &ctx).unwrap();

    let mut own = vec![ParetoRecord::new(naive.clone(), naive_obj)];
    evaluate_test_accuracy(&mut own, split, &forest, 0).unwrap();
    let report = compare_to_ground_truth(&own, split, spec, &ctx, 0).unwrap();
    assert_eq!(report.status, DominationStatus::NonDominated);
    assert_eq!(report.accuracy_deltas, vec![0.0]);

    let better = ParetoRecord::new(FeatureSubset::from_indices(85, 0..5), ObjectiveVector::new(naive_obj.f1 - 1.0, 5.0));
    let other = ParetoRecord::new(FeatureSubset::from_indices(85, [3, 40]), ObjectiveVector::new(naive_obj.f1 + 1.0, 2.0));
    let mut records = vec![better, other];
    evaluate_test_accuracy(&mut records, split, &forest, 0).unwrap();
    let report = compare_to_ground_truth(&records, split, spec, &ctx, 0).unwrap();
    assert_eq!(report.status, DominationStatus::Dominated);
    assert_eq!(report.dominates_naive, vec![true, false]);
    let naive_acc = test_accuracy(&naive, split, &forest, test_seed(0, &naive)).unwrap();
    for (r, delta) in records.iter().zip(&report.accuracy_deltas) {
        let acc = test_accuracy(&r.subset, split, &forest, test_seed(0, &r.subset)).unwrap();
        assert!((delta - (acc - naive_acc)).abs() < 1e-15);
    }
}

#[test]
fn comparison_table_recomputes_test_accuracy() {
    let (_, split) = default_data();
    let members: Vec<Individual> = [(vec![0, 1], 0.3), (vec![2], 0.5), (vec![0, 1, 4], 0.4)]
        .into_iter()
        .map(|(idx, f1)| {
            let subset = FeatureSubset::from_indices(85, idx);
            let f2 = subset.cardinality() as f64;
            Individual {
                subset,
                objectives: ObjectiveVector::new(f1, f2),
                birth_generation: 0,
            }
        })
        .collect();
    let history = history_of(members, 85);
    let forest = ForestConfig::default();
    let rows = cross_formulation_table(std::slice::from_ref(&history), split, &forest, 9).unwrap();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(row.formulation, history.spec.id());
        let acc = test_accuracy(&row.subset, split, &forest, test_seed(9, &row.subset)).unwrap();
        assert_eq!(row.test_accuracy, acc);
    }
}
