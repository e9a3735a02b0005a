//! Dataset persistence: `data.csv` plus a `metadata.json` sidecar.

use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::generate::{feature_name, FeatureKind, GeneratorConfig, Lineage, SyntheticDataset};
use super::split::SplitDataset;
use crate::error::{Error, Result};

pub const DATA_FILE: &str = "data.csv";
pub const METADATA_FILE: &str = "metadata.json";
const FORMAT: &str = "mofs-dataset/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitMeta {
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub test_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub master_seed: u64,
    pub split_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub format: String,
    pub n_samples: usize,
    pub n_features: usize,
    pub fingerprint: String,
    pub config: GeneratorConfig,
    pub kinds: Vec<FeatureKind>,
    pub lineages: Vec<Lineage>,
    pub split: SplitMeta,
    pub seeds: Seeds,
}

/// Formats a float with 17 significant digits, enough to round-trip exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn save(dataset: &SyntheticDataset, split: &SplitDataset, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let data_path = dir.join(DATA_FILE);
    let file = fs::File::create(&data_path).map_err(|e| Error::io(&data_path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let d = dataset.n_features();
    let header: Vec<String> = (0..d).map(feature_name).chain(["target".to_string()]).collect();
    let io_err = |e| Error::io(&data_path, e);
    writeln!(w, "{}", header.join(",")).map_err(io_err)?;
    let mut line = String::new();
    for (row, label) in dataset.x.rows().into_iter().zip(&dataset.y) {
        line.clear();
        for v in row {
            line.push_str(&fmt_f64(*v));
            line.push(',');
        }
        line.push_str(&label.to_string());
        writeln!(w, "{line}").map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;

    let meta = Metadata {
        format: FORMAT.to_string(),
        n_samples: dataset.n_samples(),
        n_features: d,
        fingerprint: dataset.fingerprint(),
        config: dataset.config.clone(),
        kinds: dataset.kinds.clone(),
        lineages: dataset.lineages.clone(),
        split: SplitMeta {
            train_indices: split.train_indices.clone(),
            test_indices: split.test_indices.clone(),
            test_fraction: split.test_fraction,
        },
        seeds: Seeds {
            master_seed: dataset.config.master_seed,
            split_seed: split.split_seed,
        },
    };
    let meta_path = dir.join(METADATA_FILE);
    let text = serde_json::to_string_pretty(&meta)?;
    fs::write(&meta_path, text + "\n").map_err(|e| Error::io(&meta_path, e))
}

pub fn load_metadata(dir: &Path) -> Result<Metadata> {
    let meta_path = dir.join(METADATA_FILE);
    if !meta_path.is_file() {
        return Err(Error::schema(&meta_path, "metadata sidecar is missing"));
    }
    let text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let meta: Metadata = serde_json::from_str(&text)
        .map_err(|e| Error::schema(&meta_path, format!("unreadable sidecar: {e}")))?;
    if meta.format != FORMAT {
        return Err(Error::schema(&meta_path, format!("unknown format {:?}", meta.format)));
    }
    Ok(meta)
}

pub fn load(dir: &Path) -> Result<(SyntheticDataset, SplitDataset)> {
    let data_path = dir.join(DATA_FILE);
    if !dir.is_dir() || !data_path.is_file() {
        return Err(Error::Missing {
            what: "dataset",
            path: dir.to_path_buf(),
        });
    }
    let meta = load_metadata(dir)?;
    let d = meta.n_features;
    if meta.kinds.len() != d {
        return Err(Error::schema(dir, format!("{} kinds for {d} features", meta.kinds.len())));
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(&data_path)?;
    let header = reader.headers()?.clone();
    if header.len() != d + 1 {
        return Err(Error::schema(
            &data_path,
            format!("header has {} feature columns, sidecar says {d}", header.len().saturating_sub(1)),
        ));
    }
    for (j, name) in header.iter().enumerate() {
        let want = if j < d { feature_name(j) } else { "target".to_string() };
        if name != want {
            return Err(Error::schema(&data_path, format!("column {j} is {name:?}, expected {want:?}")));
        }
    }

    let mut values = Vec::with_capacity(meta.n_samples * d);
    let mut y = Vec::with_capacity(meta.n_samples);
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != d + 1 {
            return Err(Error::schema(&data_path, format!("row {r} has {} fields", record.len())));
        }
        for field in record.iter().take(d) {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::schema(&data_path, format!("row {r}: bad number {field:?}")))?;
            values.push(v);
        }
        let label: usize = record[d]
            .parse()
            .map_err(|_| Error::schema(&data_path, format!("row {r}: bad label {:?}", &record[d])))?;
        if label >= meta.config.n_classes {
            return Err(Error::schema(&data_path, format!("row {r}: label {label} out of range")));
        }
        y.push(label);
    }
    if y.len() != meta.n_samples {
        return Err(Error::schema(
            &data_path,
            format!("{} rows, sidecar says {}", y.len(), meta.n_samples),
        ));
    }
    let x = Array2::from_shape_vec((meta.n_samples, d), values).expect("row-major values");
    let dataset = SyntheticDataset {
        x,
        y,
        kinds: meta.kinds,
        lineages: meta.lineages,
        config: meta.config,
    };
    if dataset.fingerprint() != meta.fingerprint {
        return Err(Error::schema(dir, "content does not match the recorded fingerprint"));
    }

    let n = dataset.n_samples();
    let mut seen = vec![false; n];
    for &i in meta.split.train_indices.iter().chain(&meta.split.test_indices) {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::schema(dir, format!("split index {i} is out of range or repeated")));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::schema(dir, "split does not cover every sample"));
    }
    let split = SplitDataset::from_indices(
        &dataset,
        meta.split.train_indices,
        meta.split.test_indices,
        meta.seeds.split_seed,
        meta.split.test_fraction,
    );
    Ok((dataset, split))
}
