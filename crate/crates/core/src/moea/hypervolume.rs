//! Exact two-objective hypervolume and per-point exclusive contributions.

use crate::objectives::ObjectiveVector;

fn inside(p: &ObjectiveVector, reference: &ObjectiveVector) -> bool {
    p.f1 < reference.f1 && p.f2 < reference.f2
}

/// Indices of points strictly inside the reference box, ordered by `(f1, f2)`
/// with index as the final tie-break.
fn sorted_inside(points: &[ObjectiveVector], reference: &ObjectiveVector) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len())
        .filter(|&i| inside(&points[i], reference))
        .collect();
    idx.sort_by(|&a, &b| {
        points[a]
            .f1
            .total_cmp(&points[b].f1)
            .then(points[a].f2.total_cmp(&points[b].f2))
            .then(a.cmp(&b))
    });
    idx
}

/// The staircase of non-dominated points, ascending in `f1` and strictly
/// descending in `f2`. Of a set of duplicates only the first is kept.
fn staircase(points: &[ObjectiveVector], order: &[usize]) -> Vec<usize> {
    let mut stairs = Vec::new();
    let mut best_f2 = f64::INFINITY;
    for &i in order {
        if points[i].f2 < best_f2 {
            best_f2 = points[i].f2;
            stairs.push(i);
        }
    }
    stairs
}

fn staircase_area(points: &[ObjectiveVector], stairs: &[usize], reference: &ObjectiveVector) -> f64 {
    let mut hv = 0.0;
    for (s, &i) in stairs.iter().enumerate() {
        let next_f1 = stairs.get(s + 1).map_or(reference.f1, |&j| points[j].f1);
        hv += (next_f1 - points[i].f1) * (reference.f2 - points[i].f2);
    }
    hv
}

/// Area dominated by `points` and bounded by `reference`. Points with any
/// coordinate at or beyond the reference contribute nothing.
pub fn hypervolume_2d(points: &[ObjectiveVector], reference: ObjectiveVector) -> f64 {
    let order = sorted_inside(points, &reference);
    staircase_area(points, &staircase(points, &order), &reference)
}

/// `hypervolume(all) - hypervolume(all \ {p})` for every point. Dominated
/// points, duplicated points and points outside the reference box get 0.
pub fn hv_contribution_2d(points: &[ObjectiveVector], reference: ObjectiveVector) -> Vec<f64> {
    let mut out = vec![0.0; points.len()];
    let order = sorted_inside(points, &reference);
    let stairs = staircase(points, &order);
    let total = staircase_area(points, &stairs, &reference);
    for (s, &i) in stairs.iter().enumerate() {
        let p = points[i];
        let duplicated = order
            .iter()
            .any(|&j| j != i && points[j].f1 == p.f1 && points[j].f2 == p.f2);
        if duplicated {
            continue;
        }
        let right = stairs.get(s + 1).map_or(reference.f1, |&j| points[j].f1);
        let above = if s == 0 { reference.f2 } else { points[stairs[s - 1]].f2 };
        // a dominated point inside the rectangle shields part of it
        let shielded = order
            .iter()
            .any(|&j| j != i && points[j].f1 < right && points[j].f2 < above);
        out[i] = if shielded {
            let rest: Vec<usize> = order.iter().copied().filter(|&j| j != i).collect();
            total - staircase_area(points, &staircase(points, &rest), &reference)
        } else {
            (right - p.f1) * (above - p.f2)
        };
    }
    out
}
