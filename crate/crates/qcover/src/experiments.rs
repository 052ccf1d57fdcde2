//! The three experiment drivers behind `rq1`, `rq2` and `rq3`.
//!
//! * rq1 scores the reference state families and compares each to Haar states.
//! * rq2 runs the MMD randomness sweep over generator depth.
//! * rq3 scores circuit-generated ensembles at matched gate budgets plus depth
//!   sweeps and compares each to Haar states.

use std::path::{Path, PathBuf};

use qcover_core::scores::BlockSpec;
use qcover_core::{GeneratorConfig, GeneratorKind, RngHandle};
use serde_json::json;

use crate::ensemble::{score_source, Ensemble, Source, StateFamily};
use crate::error::{Error, Result};
use crate::output::{ensemble_result, write_ensembles, Summary};
use crate::sweep::{null_calibration, randomness_sweep, write_sweep_csv, SweepConfig, SweepResult};

/// Everything an experiment produced.
#[derive(Debug, Clone)]
pub struct Report {
    pub prefix: String,
    pub ensembles: Vec<Ensemble>,
    pub sweep: Option<SweepResult>,
    pub summary: Summary,
}

impl Report {
    pub fn ensemble(&self, label: &str) -> Option<&Ensemble> {
        self.ensembles.iter().find(|e| e.label == label)
    }

    /// Writes all CSV/SVG files and `summary.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let seed = self.summary.seed;
        let mut files = write_ensembles(dir, &self.prefix, &self.ensembles, seed)?;
        if let Some(sweep) = &self.sweep {
            let p = dir.join(format!("{}_sweep.csv", self.prefix));
            write_sweep_csv(&p, &sweep.rows)?;
            files.push(p);
        }
        let p = dir.join("summary.json");
        self.summary.write(&p)?;
        files.push(p);
        Ok(files)
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::Value {
            key: "samples".into(),
            msg: "must be >= 1".into(),
        });
    }
    Ok(())
}

fn family_tag(f: StateFamily) -> u64 {
    100 + StateFamily::ALL.iter().position(|&g| g == f).expect("listed") as u64
}

fn circuit_tag(cfg: &GeneratorConfig) -> u64 {
    let k = GeneratorKind::ALL.iter().position(|&g| g == cfg.kind).expect("listed") as u64;
    1000 * (k + 1) + cfg.depth as u64
}

fn source_tag(source: &Source) -> u64 {
    match source {
        Source::Family(f) => family_tag(*f),
        Source::Circuit(cfg) => circuit_tag(cfg),
    }
}

fn add_ensemble(summary: &mut Summary, e: &Ensemble, reference: Option<&Ensemble>) -> Result<()> {
    summary.results.insert(e.label.clone(), ensemble_result(e));
    if let Some(r) = reference {
        if r.label != e.label {
            summary.wasserstein.insert(e.label.clone(), e.wasserstein_to(r)?);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rq1Config {
    pub n: usize,
    pub samples: usize,
}

impl Default for Rq1Config {
    fn default() -> Self {
        Self { n: 6, samples: 5000 }
    }
}

/// In-A block `{0..n/2}` and a block of the same size straddling the A|B cut.
/// For n = 6 these are `{0,1,2}` and `{2,3,4}`.
pub fn rq1_blocks(n: usize) -> Vec<BlockSpec> {
    let n_a = (n / 2).max(1);
    let start = n_a - 1;
    vec![
        BlockSpec::new("s2_A", (0..n_a).collect::<Vec<_>>()),
        BlockSpec::new("s2_AB", (start..start + n_a).collect::<Vec<_>>()),
    ]
}

pub fn run_rq1(cfg: &Rq1Config, seed: u64) -> Result<Report> {
    check_samples(cfg.samples)?;
    if cfg.n < 2 {
        return Err(Error::Value {
            key: "qubits".into(),
            msg: "rq1 needs at least 2 qubits".into(),
        });
    }
    let master = RngHandle::new(seed);
    let blocks = rq1_blocks(cfg.n);
    let mut ensembles = Vec::new();
    for family in StateFamily::ALL {
        let count = if family.is_random() { cfg.samples } else { 1 };
        let source = Source::Family(family);
        ensembles.push(score_source(
            &source,
            cfg.n,
            count,
            &blocks,
            &master.derive_substream(source_tag(&source)),
        )?);
    }
    let mut summary = Summary::new(seed);
    summary.config.insert("experiment".into(), json!("rq1"));
    summary.config.insert("qubits".into(), json!(cfg.n));
    summary.config.insert("samples".into(), json!(cfg.samples));
    summary.config.insert(
        "blocks".into(),
        json!(blocks.iter().map(|b| (b.label.clone(), b.qubits.clone())).collect::<Vec<_>>()),
    );
    let reference = ensembles[0].clone();
    for e in &ensembles {
        add_ensemble(&mut summary, e, Some(&reference))?;
    }
    Ok(Report {
        prefix: "rq1".into(),
        ensembles,
        sweep: None,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rq3Config {
    pub n: usize,
    pub samples: usize,
    pub bc_layers: Vec<usize>,
    pub rc_budgets: Vec<usize>,
    pub ucnot_layers: Vec<usize>,
    /// The four generators compared at comparable gate budgets.
    pub matched: Vec<GeneratorConfig>,
}

impl Rq3Config {
    pub fn new(n: usize, samples: usize) -> Self {
        Self {
            n,
            samples,
            bc_layers: vec![1, 2, 4, 6],
            rc_budgets: vec![17, 34, 68, 102],
            ucnot_layers: vec![1],
            matched: vec![
                GeneratorConfig::new(GeneratorKind::Bc, n, 2),
                GeneratorConfig::new(GeneratorKind::Rc, n, 34),
                GeneratorConfig::new(GeneratorKind::Ucnot, n, 1),
                GeneratorConfig::new(GeneratorKind::Iqft, n, 0),
            ],
        }
    }

    fn all_generators(&self) -> Vec<GeneratorConfig> {
        let n = self.n;
        let mut out: Vec<GeneratorConfig> = self.matched.clone();
        let extra = self
            .bc_layers
            .iter()
            .map(|&d| GeneratorConfig::new(GeneratorKind::Bc, n, d))
            .chain(self.rc_budgets.iter().map(|&d| GeneratorConfig::new(GeneratorKind::Rc, n, d)))
            .chain(self.ucnot_layers.iter().map(|&d| GeneratorConfig::new(GeneratorKind::Ucnot, n, d)));
        for g in extra {
            if !out.iter().any(|o| o.label() == g.label()) {
                out.push(g);
            }
        }
        out
    }
}

impl Default for Rq3Config {
    fn default() -> Self {
        Self::new(5, 2000)
    }
}

pub fn rq3_blocks() -> Vec<BlockSpec> {
    vec![
        BlockSpec::new("s2_A2", vec![0, 1]),
        BlockSpec::new("s2_A3", vec![0, 1, 2]),
    ]
}

pub fn run_rq3(cfg: &Rq3Config, seed: u64) -> Result<Report> {
    check_samples(cfg.samples)?;
    if cfg.n < 4 {
        return Err(Error::Value {
            key: "qubits".into(),
            msg: "rq3 blocks need at least 4 qubits".into(),
        });
    }
    let master = RngHandle::new(seed);
    let blocks = rq3_blocks();
    let haar = Source::Family(StateFamily::Haar);
    let mut ensembles = vec![score_source(
        &haar,
        cfg.n,
        cfg.samples,
        &blocks,
        &master.derive_substream(source_tag(&haar)),
    )?];
    for g in cfg.all_generators() {
        let source = Source::Circuit(g);
        ensembles.push(score_source(
            &source,
            cfg.n,
            cfg.samples,
            &blocks,
            &master.derive_substream(source_tag(&source)),
        )?);
    }
    let mut summary = Summary::new(seed);
    summary.config.insert("experiment".into(), json!("rq3"));
    summary.config.insert("qubits".into(), json!(cfg.n));
    summary.config.insert("samples".into(), json!(cfg.samples));
    summary.config.insert(
        "matched".into(),
        json!(cfg.matched.iter().map(|g| g.label()).collect::<Vec<_>>()),
    );
    summary.config.insert("bc_layers".into(), json!(cfg.bc_layers));
    summary.config.insert("rc_budgets".into(), json!(cfg.rc_budgets));
    summary.config.insert("ucnot_layers".into(), json!(cfg.ucnot_layers));
    let reference = ensembles[0].clone();
    for e in &ensembles {
        add_ensemble(&mut summary, e, Some(&reference))?;
    }
    Ok(Report {
        prefix: "rq3".into(),
        ensembles,
        sweep: None,
        summary,
    })
}

pub fn run_rq2(cfg: &SweepConfig, null_reps: usize, seed: u64, progress: impl FnMut(&str)) -> Result<Report> {
    let sweep = randomness_sweep(cfg, seed, progress)?;
    let mut summary = Summary::new(seed);
    summary.config.insert("experiment".into(), json!("rq2"));
    summary.config.insert("qubits".into(), json!(cfg.qubits));
    summary.config.insert(
        "kinds".into(),
        json!(cfg.kinds.iter().map(|k| k.as_str()).collect::<Vec<_>>()),
    );
    summary.config.insert("mmd_samples".into(), json!(cfg.m));
    summary.config.insert("permutations".into(), json!(cfg.n_perm));
    summary.config.insert("reps".into(), json!(cfg.reps));
    summary.config.insert("threshold".into(), json!(cfg.threshold));
    summary.config.insert("bc_max_layers".into(), json!(cfg.bc_max_layers));
    summary.config.insert("ucnot_max_layers".into(), json!(cfg.ucnot_max_layers));
    summary.config.insert("rc_step".into(), json!(cfg.rc_step));
    summary.config.insert("rc_max".into(), json!(cfg.rc_max));
    summary.config.insert("early_stop".into(), json!(cfg.early_stop));
    summary.config.insert("null_reps".into(), json!(null_reps));
    summary.results.insert("crossings".into(), serde_json::to_value(&sweep.crossings)?);
    if null_reps > 0 {
        let nulls = cfg
            .qubits
            .iter()
            .map(|&n| null_calibration(n, cfg.m, cfg.n_perm, null_reps, cfg.threshold, seed))
            .collect::<Result<Vec<_>>>()?;
        summary.results.insert("null".into(), serde_json::to_value(&nulls)?);
    }
    Ok(Report {
        prefix: "rq2".into(),
        ensembles: Vec::new(),
        sweep: Some(sweep),
        summary,
    })
}
