//! Plot-ready CSV tables.

use std::fs;
use std::path::Path;

use super::cluster::Clustering;
use super::front::ParetoRecord;
use super::report::{ComparisonRow, CompositionMatrix, GroundTruthReport};
use crate::dataset::{feature_name, fmt_f64};
use crate::error::{Error, Result};

pub const FRONT_FILE: &str = "front.csv";
pub const COMPOSITION_FILE: &str = "composition.csv";
pub const CLUSTERS_FILE: &str = "clusters.csv";
pub const LINKAGE_FILE: &str = "linkage.csv";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.csv";
pub const COMPARISON_FILE: &str = "comparison.csv";

fn write(path: &Path, text: String) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn write_front(records: &[ParetoRecord], path: &Path) -> Result<()> {
    let mut out = String::from("bitmask_hex,subset_size,subset_fraction,f1,f2,test_accuracy,cluster_id\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.subset.to_hex(),
            r.subset.cardinality(),
            fmt_f64(r.subset_fraction),
            fmt_f64(r.f1),
            fmt_f64(r.f2),
            opt(r.test_accuracy),
            r.cluster_id.as_deref().unwrap_or("")
        ));
    }
    write(path, out)
}

/// Header row of feature names, a row of feature kinds, then one binary row
/// per solution in dendrogram order.
pub fn write_composition(records: &[ParetoRecord], matrix: &CompositionMatrix, path: &Path) -> Result<()> {
    let d = matrix.kinds.len();
    let mut out = String::from("bitmask_hex,cluster_id");
    for j in 0..d {
        out.push(',');
        out.push_str(&feature_name(j));
    }
    out.push_str("\nkind,");
    for k in &matrix.kinds {
        out.push(',');
        out.push_str(k.name());
    }
    out.push('\n');
    for ((&i, row), label) in matrix.row_records.iter().zip(&matrix.rows).zip(&matrix.row_labels) {
        out.push_str(&records[i].subset.to_hex());
        out.push(',');
        out.push_str(label);
        for &b in row {
            out.push_str(if b { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    write(path, out)
}

pub fn write_clusters(matrix: &CompositionMatrix, path: &Path) -> Result<()> {
    let mut out = String::from("cluster_id,n_solutions,mean_cardinality,mean_test_accuracy");
    let kinds: Vec<_> = matrix.clusters.first().map(|c| c.kind_counts.keys().copied().collect()).unwrap_or_default();
    for k in &kinds {
        out.push(',');
        out.push_str(k.name());
    }
    out.push('\n');
    for c in &matrix.clusters {
        out.push_str(&format!(
            "{},{},{},{}",
            c.label,
            c.n_solutions,
            fmt_f64(c.mean_cardinality),
            opt(c.mean_test_accuracy)
        ));
        for k in &kinds {
            out.push_str(&format!(",{}", c.kind_counts[k]));
        }
        out.push('\n');
    }
    write(path, out)
}

pub fn write_linkage(clustering: &Clustering, path: &Path) -> Result<()> {
    let mut out = String::from("left,right,distance,size\n");
    for m in &clustering.linkage {
        out.push_str(&format!("{},{},{},{}\n", m.left, m.right, fmt_f64(m.distance), m.size));
    }
    write(path, out)
}

/// The naive subset on the first row, then every front member.
pub fn write_ground_truth(records: &[ParetoRecord], report: &GroundTruthReport, path: &Path) -> Result<()> {
    let mut out = String::from(
        "role,bitmask_hex,subset_size,f1,f2,test_accuracy,accuracy_delta,dominates_naive,naive_status\n",
    );
    let status = report.status.as_str();
    out.push_str(&format!(
        "naive,{},{},{},{},{},{},,{status}\n",
        report.naive_subset.to_hex(),
        report.naive_subset.cardinality(),
        fmt_f64(report.naive_objectives.f1),
        fmt_f64(report.naive_objectives.f2),
        fmt_f64(report.naive_test_accuracy),
        fmt_f64(0.0)
    ));
    for ((r, &dom), &delta) in records.iter().zip(&report.dominates_naive).zip(&report.accuracy_deltas) {
        out.push_str(&format!(
            "member,{},{},{},{},{},{},{dom},{status}\n",
            r.subset.to_hex(),
            r.subset.cardinality(),
            fmt_f64(r.f1),
            fmt_f64(r.f2),
            opt(r.test_accuracy),
            fmt_f64(delta)
        ));
    }
    write(path, out)
}

pub fn write_comparison(rows: &[ComparisonRow], path: &Path) -> Result<()> {
    let mut out = String::from("formulation,init,bitmask_hex,subset_size,subset_fraction,f1,f2,test_accuracy\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.formulation,
            r.init,
            r.subset.to_hex(),
            r.subset_size,
            fmt_f64(r.subset_fraction),
            fmt_f64(r.f1),
            fmt_f64(r.f2),
            fmt_f64(r.test_accuracy)
        ));
    }
    write(path, out)
}
