//! Output files: per-sample score CSVs, per-qubit CSVs, `summary.json` and SVG
//! histograms.
//!
//! Score CSVs have the header `sample,<score names…>,seed` with one row per
//! sample in sample order. Floats use Rust's shortest round-trip formatting,
//! so reading a CSV back reproduces the values bit for bit.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qcover_core::scores::SCORE_NAMES;
use qcover_core::{StateVector, C64};
use serde::{Deserialize, Serialize};

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::svg;

/// Top-level summary written as `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: BTreeMap<String, serde_json::Value>,
    pub results: BTreeMap<String, serde_json::Value>,
    /// `ensemble label → score name → W₁ to the reference ensemble`.
    pub wasserstein: BTreeMap<String, BTreeMap<String, f64>>,
    pub seed: u64,
    pub version: String,
}

impl Summary {
    pub fn new(seed: u64) -> Self {
        Self {
            config: BTreeMap::new(),
            results: BTreeMap::new(),
            wasserstein: BTreeMap::new(),
            seed,
            version: crate::VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json()?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `sample,<names…>,seed`, one row per report.
pub fn write_scores_csv(path: &Path, ensemble: &Ensemble, seed: u64) -> Result<()> {
    let err = |e| Error::csv(path, e);
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    let names = ensemble.names();
    let mut header = vec!["sample".to_string()];
    header.extend(names.iter().cloned());
    header.push("seed".into());
    w.write_record(&header).map_err(err)?;
    for (i, r) in ensemble.reports.iter().enumerate() {
        let mut row = vec![i.to_string()];
        row.extend(r.values().into_iter().map(|(_, v)| v.to_string()));
        row.push(seed.to_string());
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Score columns read back from [`write_scores_csv`] output, keyed by name.
pub fn read_scores_csv(path: &Path) -> Result<BTreeMap<String, Vec<f64>>> {
    let err = |e| Error::csv(path, e);
    let mut r = csv::Reader::from_path(path).map_err(err)?;
    let header: Vec<String> = r.headers().map_err(err)?.iter().map(String::from).collect();
    let mut cols: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for record in r.records() {
        let record = record.map_err(err)?;
        for (name, field) in header.iter().zip(record.iter()) {
            if name == "sample" || name == "seed" {
                continue;
            }
            let v: f64 = field.parse().map_err(|e: std::num::ParseFloatError| Error::Value {
                key: name.clone(),
                msg: format!("{}: {e}", path.display()),
            })?;
            cols.entry(name.clone()).or_default().push(v);
        }
    }
    Ok(cols)
}

/// Writes `sample,k,ms,mcs,ps,pcs,seed` with one row per (sample, qubit).
pub fn write_per_qubit_csv(path: &Path, ensemble: &Ensemble, seed: u64) -> Result<()> {
    let err = |e| Error::csv(path, e);
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["sample", "k", "ms", "mcs", "ps", "pcs", "seed"])
        .map_err(err)?;
    for (i, r) in ensemble.reports.iter().enumerate() {
        for k in 0..r.ms.len() {
            w.write_record([
                i.to_string(),
                k.to_string(),
                r.ms[k].to_string(),
                r.mcs[k].to_string(),
                r.ps[k].to_string(),
                r.pcs[k].to_string(),
                seed.to_string(),
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Per-ensemble summary entry for `results`.
pub fn ensemble_result(e: &Ensemble) -> serde_json::Value {
    serde_json::json!({
        "samples": e.len(),
        "qubits": e.n,
        "gate_count": e.gate_count,
        "stats": e.stats(),
    })
}

/// Writes scores, per-qubit scores and one histogram per score column for a
/// group of ensembles. Returns the written paths.
pub fn write_ensembles(dir: &Path, prefix: &str, ensembles: &[Ensemble], seed: u64) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for e in ensembles {
        let p = dir.join(format!("{prefix}_{}_scores.csv", e.label));
        write_scores_csv(&p, e, seed)?;
        written.push(p);
        let p = dir.join(format!("{prefix}_{}_per_qubit.csv", e.label));
        write_per_qubit_csv(&p, e, seed)?;
        written.push(p);
    }
    let mut names: Vec<String> = SCORE_NAMES.iter().map(|s| s.to_string()).collect();
    for e in ensembles {
        for n in e.names() {
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    for name in names {
        let cols: Vec<(String, Vec<f64>)> = ensembles
            .iter()
            .filter_map(|e| e.column(&name).map(|c| (e.label.clone(), c)))
            .collect();
        if cols.is_empty() {
            continue;
        }
        let series: Vec<(&str, &[f64])> = cols.iter().map(|(l, c)| (l.as_str(), c.as_slice())).collect();
        let title = format!("{prefix} {name} (seed {seed})");
        let p = dir.join(format!("{prefix}_{name}.svg"));
        write_text(&p, &svg::histogram(&title, &series, 0.0, 1.0))?;
        written.push(p);
    }
    Ok(written)
}

/// State files: `#` comment lines, then `index,re,im` rows in index order.
pub fn state_to_csv(psi: &StateVector, comment: &str) -> String {
    let mut s = String::new();
    for line in comment.lines() {
        s.push_str("# ");
        s.push_str(line);
        s.push('\n');
    }
    s.push_str("index,re,im\n");
    for (i, z) in psi.amplitudes().iter().enumerate() {
        s.push_str(&format!("{i},{},{}\n", z.re, z.im));
    }
    s
}

/// Parses [`state_to_csv`] output. Rows may come in any order; missing
/// indices are zero amplitudes.
pub fn state_from_csv(text: &str, origin: &Path) -> Result<StateVector> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for row in r.deserialize::<(usize, f64, f64)>() {
        let (i, re, im) = row.map_err(|e| Error::csv(origin, e))?;
        entries.push((i, C64::new(re, im)));
    }
    let len = entries.iter().map(|&(i, _)| i + 1).max().unwrap_or(0).next_power_of_two();
    let mut amps = vec![C64::new(0.0, 0.0); len.max(2)];
    for (i, z) in entries {
        amps[i] = z;
    }
    Ok(StateVector::new(amps)?)
}
