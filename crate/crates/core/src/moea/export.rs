//! Run directories: `history.csv`, `hv_trace.csv` and `manifest.json`.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::MoeaConfig;
use super::run::{RunHistory, Snapshot};
use super::select::Individual;
use crate::dataset::fmt_f64;
use crate::error::{Error, Result};
use crate::objectives::{ObjectiveParams, ObjectiveSpec, ObjectiveVector};
use crate::subset::FeatureSubset;

pub const HISTORY_FILE: &str = "history.csv";
pub const HV_TRACE_FILE: &str = "hv_trace.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
const FORMAT: &str = "mofs-run/1";
const HISTORY_HEADER: [&str; 8] = [
    "generation",
    "evaluations",
    "member_index",
    "bitmask_hex",
    "f1",
    "f2",
    "subset_size",
    "birth_generation",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub format: String,
    pub spec: ObjectiveSpec,
    pub objective: String,
    pub config: MoeaConfig,
    pub params: ObjectiveParams,
    pub objective_seed: u64,
    pub n_features: usize,
    pub dataset_fingerprint: Option<String>,
    pub trace_reference: ObjectiveVector,
    pub evaluations: usize,
    pub cache_hits: usize,
}

impl RunManifest {
    pub fn of(history: &RunHistory) -> Self {
        RunManifest {
            format: FORMAT.to_string(),
            spec: history.spec,
            objective: history.spec.id(),
            config: history.config.clone(),
            params: history.params.clone(),
            objective_seed: history.objective_seed,
            n_features: history.n_features,
            dataset_fingerprint: history.dataset_fingerprint.clone(),
            trace_reference: history.trace_reference,
            evaluations: history.evaluations,
            cache_hits: history.cache_hits,
        }
    }
}

pub fn save_history(history: &RunHistory, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let path = dir.join(HISTORY_FILE);
    let mut out = String::new();
    out.push_str(&HISTORY_HEADER.join(","));
    out.push('\n');
    for snap in &history.snapshots {
        for (i, m) in snap.members.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                snap.generation,
                snap.evaluations,
                i,
                m.subset.to_hex(),
                fmt_f64(m.objectives.f1),
                fmt_f64(m.objectives.f2),
                m.subset.cardinality(),
                m.birth_generation
            ));
        }
    }
    write_file(&path, &out)?;

    let path = dir.join(HV_TRACE_FILE);
    let mut out = String::from("step,hypervolume\n");
    for (step, hv) in history.hv_trace.iter().enumerate() {
        out.push_str(&format!("{step},{}\n", fmt_f64(*hv)));
    }
    write_file(&path, &out)?;

    let path = dir.join(MANIFEST_FILE);
    write_file(&path, &(serde_json::to_string_pretty(&RunManifest::of(history))? + "\n"))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn load_manifest(dir: &Path) -> Result<RunManifest> {
    let path = dir.join(MANIFEST_FILE);
    if !path.is_file() {
        return Err(Error::Missing {
            what: "run",
            path: dir.to_path_buf(),
        });
    }
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| Error::schema(&path, format!("unreadable manifest: {e}")))?;
    if manifest.format != FORMAT {
        return Err(Error::schema(&path, format!("unknown format {:?}", manifest.format)));
    }
    Ok(manifest)
}

fn parse<T: std::str::FromStr>(path: &Path, row: usize, field: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::schema(path, format!("row {row}: cannot parse {field:?}")))
}

pub fn load_history(dir: &Path) -> Result<RunHistory> {
    let manifest = load_manifest(dir)?;
    let d = manifest.n_features;

    let path = dir.join(HISTORY_FILE);
    if !path.is_file() {
        return Err(Error::Missing {
            what: "run history",
            path: path.clone(),
        });
    }
    let mut reader = csv::Reader::from_path(&path)?;
    if reader.headers()?.iter().ne(HISTORY_HEADER) {
        return Err(Error::schema(&path, "unexpected header"));
    }
    let mut snapshots: Vec<Snapshot> = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != HISTORY_HEADER.len() {
            return Err(Error::schema(&path, format!("row {r} has {} fields", rec.len())));
        }
        let generation: usize = parse(&path, r, &rec[0])?;
        let evaluations: usize = parse(&path, r, &rec[1])?;
        let member = Individual {
            subset: FeatureSubset::from_hex(&rec[3], d)?,
            objectives: ObjectiveVector::new(parse(&path, r, &rec[4])?, parse(&path, r, &rec[5])?),
            birth_generation: parse(&path, r, &rec[7])?,
        };
        match snapshots.last_mut() {
            Some(s) if s.generation == generation => s.members.push(member),
            _ => snapshots.push(Snapshot {
                generation,
                evaluations,
                members: vec![member],
            }),
        }
    }
    if snapshots.is_empty() {
        return Err(Error::schema(&path, "no snapshots"));
    }

    let path = dir.join(HV_TRACE_FILE);
    let mut reader = csv::Reader::from_path(&path)?;
    let mut hv_trace = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec?;
        hv_trace.push(parse(&path, r, rec.get(1).unwrap_or(""))?);
    }

    Ok(RunHistory {
        spec: manifest.spec,
        config: manifest.config,
        params: manifest.params,
        objective_seed: manifest.objective_seed,
        n_features: d,
        dataset_fingerprint: manifest.dataset_fingerprint,
        snapshots,
        hv_trace,
        trace_reference: manifest.trace_reference,
        evaluations: manifest.evaluations,
        cache_hits: manifest.cache_hits,
    })
}
