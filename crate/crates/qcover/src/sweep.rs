//! MMD randomness sweep: how deep must a generator go before its unitaries
//! are indistinguishable from Haar samples?
//!
//! For every qubit count, generator and depth the sweep runs `reps` MMD tests
//! of `m` generated unitaries against `m` Haar unitaries and records the
//! p-values. A depth counts as random once the median p over repetitions
//! exceeds the threshold.
//!
//! RNG layout below the master handle, per qubit count `n` and repetition `r`:
//! `n / r / 0 / i` is Haar reference sample `i`; `n / r / (kind+1) / depth / 0 / i`
//! is generated sample `i`; `n / r / (kind+1) / depth / 1` seeds the permutations.
//! The Haar reference set is therefore shared by all depths and generators
//! within a repetition.

use std::collections::HashMap;
use std::path::Path;

use qcover_core::circuit::circuit_unitary;
use qcover_core::sampling::sample_haar_unitary;
use qcover_core::stats::{embed_unitary, median, mmd_test, EmbeddedSample};
use qcover_core::{GeneratorConfig, GeneratorKind, RngHandle};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Haar reference sets are kept in memory across depths up to this many bytes.
const HAAR_CACHE_BYTES: usize = 96 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub qubits: Vec<usize>,
    pub kinds: Vec<GeneratorKind>,
    /// Samples per ensemble.
    pub m: usize,
    pub n_perm: usize,
    pub reps: usize,
    pub threshold: f64,
    pub bc_max_layers: usize,
    pub ucnot_max_layers: usize,
    pub rc_step: usize,
    pub rc_max: usize,
    /// Stop a generator's sweep at its first depth whose median p passes.
    pub early_stop: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            qubits: vec![3, 5, 7],
            kinds: GeneratorKind::ALL.to_vec(),
            m: 100,
            n_perm: 200,
            reps: 10,
            threshold: 0.01,
            bc_max_layers: 6,
            ucnot_max_layers: 4,
            rc_step: 5,
            rc_max: 120,
            early_stop: true,
        }
    }
}

impl SweepConfig {
    /// Depth grid for one generator; iQFT has the single depth 0.
    pub fn depths(&self, kind: GeneratorKind) -> Vec<usize> {
        match kind {
            GeneratorKind::Bc => (1..=self.bc_max_layers).collect(),
            GeneratorKind::Ucnot => (1..=self.ucnot_max_layers).collect(),
            GeneratorKind::Rc => (1..=self.rc_max / self.rc_step.max(1))
                .map(|i| i * self.rc_step)
                .collect(),
            GeneratorKind::Iqft => vec![0],
        }
    }
}

/// One MMD test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kind: String,
    pub n: usize,
    pub depth: usize,
    pub gate_count: usize,
    pub rep: usize,
    pub p_value: f64,
    /// Median p over all repetitions at this (kind, n, depth).
    pub median_p: f64,
    pub bandwidth: f64,
    pub seed: u64,
}

/// First depth at which a generator passes, if any within the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub kind: String,
    pub n: usize,
    pub depth: Option<usize>,
    pub gate_count: Option<usize>,
    /// Median p at the crossing, or at the last depth tried.
    pub median_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub crossings: Vec<Crossing>,
}

impl SweepResult {
    pub fn crossing(&self, kind: GeneratorKind, n: usize) -> Option<&Crossing> {
        self.crossings
            .iter()
            .find(|c| c.kind == kind.as_str() && c.n == n)
    }
}

fn kind_index(kind: GeneratorKind) -> u64 {
    GeneratorKind::ALL.iter().position(|&k| k == kind).expect("listed kind") as u64
}

/// `m` gauge-fixed Haar unitaries of dimension `2^n`.
pub fn haar_reference(n: usize, m: usize, rng: &RngHandle) -> Vec<EmbeddedSample> {
    (0..m)
        .into_par_iter()
        .map(|i| embed_unitary(&sample_haar_unitary(1 << n, &mut rng.derive_substream(i as u64))))
        .collect()
}

/// `m` gauge-fixed unitaries of circuits drawn from `cfg`.
pub fn generated_ensemble(cfg: &GeneratorConfig, m: usize, rng: &RngHandle) -> Result<Vec<EmbeddedSample>> {
    (0..m)
        .into_par_iter()
        .map(|i| {
            let c = cfg.generate(&mut rng.derive_substream(i as u64))?;
            Ok(embed_unitary(&circuit_unitary(&c)))
        })
        .collect()
}

struct HaarRefs {
    n: usize,
    m: usize,
    root: RngHandle,
    cache: Option<HashMap<usize, Vec<EmbeddedSample>>>,
}

impl HaarRefs {
    fn new(n: usize, m: usize, reps: usize, root: RngHandle) -> Self {
        let bytes = reps * m * (2usize << (2 * n)) * std::mem::size_of::<f64>();
        let cache = (bytes <= HAAR_CACHE_BYTES).then(HashMap::new);
        Self { n, m, root, cache }
    }

    // Regenerating from the same substream gives the same samples, so the cache
    // only saves time.
    fn get(&mut self, rep: usize) -> std::borrow::Cow<'_, [EmbeddedSample]> {
        let rng = self.root.derive_substream(rep as u64).derive_substream(0);
        match &mut self.cache {
            Some(cache) => {
                let (n, m) = (self.n, self.m);
                std::borrow::Cow::Borrowed(cache.entry(rep).or_insert_with(|| haar_reference(n, m, &rng)))
            }
            None => std::borrow::Cow::Owned(haar_reference(self.n, self.m, &rng)),
        }
    }
}

/// Runs the sweep. `progress` receives one line per completed depth.
pub fn randomness_sweep(
    cfg: &SweepConfig,
    seed: u64,
    mut progress: impl FnMut(&str),
) -> Result<SweepResult> {
    if cfg.m < 2 || cfg.reps == 0 || cfg.rc_step == 0 {
        return Err(Error::Value {
            key: "sweep".into(),
            msg: "need m >= 2, reps >= 1 and rc-step >= 1".into(),
        });
    }
    let master = RngHandle::new(seed);
    let mut rows = Vec::new();
    let mut crossings = Vec::new();
    for &n in &cfg.qubits {
        let n_root = master.derive_substream(n as u64);
        let mut haar = HaarRefs::new(n, cfg.m, cfg.reps, n_root.clone());
        for &kind in &cfg.kinds {
            let mut crossing = Crossing {
                kind: kind.as_str().to_string(),
                n,
                depth: None,
                gate_count: None,
                median_p: f64::NAN,
            };
            for depth in cfg.depths(kind) {
                let gen = GeneratorConfig::new(kind, n, depth);
                let gate_count = gen.expected_gate_count();
                let mut tests = Vec::with_capacity(cfg.reps);
                for rep in 0..cfg.reps {
                    let branch = n_root
                        .derive_substream(rep as u64)
                        .derive_substream(kind_index(kind) + 1)
                        .derive_substream(depth as u64);
                    let xs = generated_ensemble(&gen, cfg.m, &branch.derive_substream(0))?;
                    let ys = haar.get(rep);
                    tests.push(mmd_test(&xs, &ys, cfg.n_perm, &branch.derive_substream(1))?);
                }
                let ps: Vec<f64> = tests.iter().map(|t| t.p_value).collect();
                let med = median(&ps);
                for (rep, t) in tests.iter().enumerate() {
                    rows.push(SweepRow {
                        kind: kind.as_str().to_string(),
                        n,
                        depth,
                        gate_count,
                        rep,
                        p_value: t.p_value,
                        median_p: med,
                        bandwidth: t.bandwidth,
                        seed,
                    });
                }
                progress(&format!(
                    "{kind} n={n} depth={depth} gates={gate_count} median_p={med}"
                ));
                crossing.median_p = med;
                if med > cfg.threshold {
                    if crossing.depth.is_none() {
                        crossing.depth = Some(depth);
                        crossing.gate_count = Some(gate_count);
                    }
                    if cfg.early_stop {
                        break;
                    }
                }
            }
            if let Some(d) = crossing.depth {
                crossing.median_p = rows
                    .iter()
                    .find(|r| r.kind == crossing.kind && r.n == n && r.depth == d)
                    .map(|r| r.median_p)
                    .unwrap_or(crossing.median_p);
            }
            crossings.push(crossing);
        }
    }
    Ok(SweepResult { rows, crossings })
}

/// Outcome of repeated Haar-vs-Haar tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullCalibration {
    pub n: usize,
    pub m: usize,
    pub reps: usize,
    pub threshold: f64,
    pub p_values: Vec<f64>,
    pub rejections: usize,
    pub rejection_rate: f64,
}

/// Two independent Haar ensembles per repetition, tested against each other.
pub fn null_calibration(
    n: usize,
    m: usize,
    n_perm: usize,
    reps: usize,
    threshold: f64,
    seed: u64,
) -> Result<NullCalibration> {
    // Stream tag kept away from the sweep's per-n branches.
    let root = RngHandle::new(seed).derive_substream(u64::MAX - n as u64);
    let p_values = (0..reps)
        .map(|r| {
            let branch = root.derive_substream(r as u64);
            let xs = haar_reference(n, m, &branch.derive_substream(0));
            let ys = haar_reference(n, m, &branch.derive_substream(1));
            Ok(mmd_test(&xs, &ys, n_perm, &branch.derive_substream(2))?.p_value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let rejections = p_values.iter().filter(|&&p| p <= threshold).count();
    Ok(NullCalibration {
        n,
        m,
        reps,
        threshold,
        rejection_rate: rejections as f64 / reps.max(1) as f64,
        p_values,
        rejections,
    })
}

pub const SWEEP_COLUMNS: [&str; 9] = [
    "kind",
    "n",
    "depth",
    "gate_count",
    "rep",
    "p_value",
    "median_p",
    "bandwidth",
    "seed",
];

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(SWEEP_COLUMNS).map_err(|e| Error::csv(path, e))?;
    for r in rows {
        w.write_record([
            r.kind.clone(),
            r.n.to_string(),
            r.depth.to_string(),
            r.gate_count.to_string(),
            r.rep.to_string(),
            r.p_value.to_string(),
            r.median_p.to_string(),
            r.bandwidth.to_string(),
            r.seed.to_string(),
        ])
        .map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    r.deserialize()
        .map(|row| row.map_err(|e| Error::csv(path, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SweepConfig {
        SweepConfig {
            qubits: vec![2],
            kinds: vec![GeneratorKind::Bc, GeneratorKind::Iqft],
            m: 12,
            n_perm: 20,
            reps: 3,
            bc_max_layers: 2,
            early_stop: false,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn depth_grids() {
        let cfg = SweepConfig::default();
        assert_eq!(cfg.depths(GeneratorKind::Bc), [1, 2, 3, 4, 5, 6]);
        assert_eq!(cfg.depths(GeneratorKind::Rc)[..3], [5, 10, 15]);
        assert_eq!(*cfg.depths(GeneratorKind::Rc).last().unwrap(), 120);
        assert_eq!(cfg.depths(GeneratorKind::Iqft), [0]);
    }

    #[test]
    fn sweep_rows_and_determinism() {
        let cfg = tiny();
        let a = randomness_sweep(&cfg, 5, |_| {}).unwrap();
        assert_eq!(a.rows.len(), (2 + 1) * 3);
        assert_eq!(a.crossings.len(), 2);
        for r in &a.rows {
            assert!(r.p_value >= 1.0 / 21.0 && r.p_value <= 1.0);
            assert_eq!(r.seed, 5);
        }
        let b = randomness_sweep(&cfg, 5, |_| {}).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn haar_cache_is_transparent() {
        let root = RngHandle::new(3);
        let mut cached = HaarRefs::new(2, 5, 2, root.clone());
        let mut uncached = HaarRefs::new(2, 5, 2, root);
        uncached.cache = None;
        assert!(cached.cache.is_some());
        assert_eq!(cached.get(1).into_owned(), uncached.get(1).into_owned());
    }

    #[test]
    fn sweep_csv_round_trip() {
        let a = randomness_sweep(&tiny(), 1, |_| {}).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        write_sweep_csv(&path, &a.rows).unwrap();
        assert_eq!(read_sweep_csv(&path).unwrap(), a.rows);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("kind,n,depth,gate_count,rep,p_value,median_p,bandwidth,seed\n"));
    }

    #[test]
    fn null_calibration_counts() {
        let r = null_calibration(2, 10, 20, 4, 0.01, 9).unwrap();
        assert_eq!(r.p_values.len(), 4);
        assert_eq!(r.rejections, r.p_values.iter().filter(|&&p| p <= 0.01).count());
    }
}
