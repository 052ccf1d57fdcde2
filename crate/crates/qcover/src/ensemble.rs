//! Sampling and scoring of state ensembles.
//!
//! Sample `i` of an ensemble always draws from `rng.derive_substream(i)`, so the
//! result does not depend on thread count or scheduling order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use qcover_core::scores::{score_state, BlockSpec, ScoreReport};
use qcover_core::states::{ghz, haar_random_state, max_entangled, product_state, uniform_amplitude, w};
use qcover_core::stats::wasserstein1;
use qcover_core::{GeneratorConfig, RngHandle, StateVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reference state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateFamily {
    Haar,
    /// Maximally entangled between the leading `n/2` qubits and the rest.
    MaxEntangled,
    UniformAmplitude,
    Product,
    Ghz,
    W,
}

impl StateFamily {
    pub const ALL: [StateFamily; 6] = [
        StateFamily::Haar,
        StateFamily::MaxEntangled,
        StateFamily::UniformAmplitude,
        StateFamily::Product,
        StateFamily::Ghz,
        StateFamily::W,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            StateFamily::Haar => "hr",
            StateFamily::MaxEntangled => "me",
            StateFamily::UniformAmplitude => "ua",
            StateFamily::Product => "p",
            StateFamily::Ghz => "ghz",
            StateFamily::W => "w",
        }
    }

    /// GHZ and W ignore the RNG.
    pub fn is_random(&self) -> bool {
        !matches!(self, StateFamily::Ghz | StateFamily::W)
    }

    pub fn sample(&self, n: usize, rng: &mut RngHandle) -> Result<StateVector> {
        let psi = match self {
            StateFamily::Haar => haar_random_state(n, rng)?,
            StateFamily::MaxEntangled => max_entangled(n, n / 2, rng)?,
            StateFamily::UniformAmplitude => uniform_amplitude(n, rng)?,
            StateFamily::Product => product_state(n, rng)?,
            StateFamily::Ghz => ghz(n)?,
            StateFamily::W => w(n)?,
        };
        Ok(psi)
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let family = match lower.as_str() {
            "hr" | "haar" => StateFamily::Haar,
            "me" => StateFamily::MaxEntangled,
            "ua" | "uniform" => StateFamily::UniformAmplitude,
            "p" | "product" => StateFamily::Product,
            "ghz" => StateFamily::Ghz,
            "w" => StateFamily::W,
            _ => {
                return Err(Error::Value {
                    key: "family".into(),
                    msg: format!("unknown state family `{s}`"),
                })
            }
        };
        Ok(family)
    }
}

/// Where an ensemble's states come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    Family(StateFamily),
    /// Output states `C|0…0⟩` of generated circuits.
    Circuit(GeneratorConfig),
}

impl Source {
    pub fn label(&self) -> String {
        match self {
            Source::Family(f) => f.label().to_string(),
            Source::Circuit(cfg) => cfg.label(),
        }
    }

    pub fn gate_count(&self) -> Option<usize> {
        match self {
            Source::Family(_) => None,
            Source::Circuit(cfg) => Some(cfg.expected_gate_count()),
        }
    }

    pub fn sample(&self, n: usize, rng: &mut RngHandle) -> Result<StateVector> {
        match self {
            Source::Family(f) => f.sample(n, rng),
            Source::Circuit(cfg) => {
                if cfg.n != n {
                    return Err(qcover_core::Error::QubitCountMismatch {
                        expected: n,
                        found: cfg.n,
                    }
                    .into());
                }
                Ok(cfg.generate(rng)?.output_state())
            }
        }
    }
}

/// Draws `count` states in parallel; sample `i` uses substream `i` of `rng`.
pub fn sample_states(source: &Source, n: usize, count: usize, rng: &RngHandle) -> Result<Vec<StateVector>> {
    (0..count)
        .into_par_iter()
        .map(|i| source.sample(n, &mut rng.derive_substream(i as u64)))
        .collect()
}

/// Summary statistics of one score column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub mean: f64,
    /// Sample standard deviation (0 for a single sample).
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl ColumnStats {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            std: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Scored samples from one source.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub label: String,
    pub n: usize,
    pub gate_count: Option<usize>,
    pub reports: Vec<ScoreReport>,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.reports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reports.is_empty()
    }

    /// Output column names: the fixed scores followed by the block labels.
    pub fn names(&self) -> Vec<String> {
        self.reports
            .first()
            .map(|r| r.values().into_iter().map(|(n, _)| n.to_string()).collect())
            .unwrap_or_default()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        self.reports.iter().map(|r| r.get(name)).collect()
    }

    pub fn stats(&self) -> BTreeMap<String, ColumnStats> {
        self.names()
            .into_iter()
            .map(|name| {
                let col = self.column(&name).expect("name from reports");
                (name, ColumnStats::of(&col))
            })
            .collect()
    }

    /// Per-score W₁ distance to `reference`, over the columns both share.
    pub fn wasserstein_to(&self, reference: &Ensemble) -> Result<BTreeMap<String, f64>> {
        let mut out = BTreeMap::new();
        for name in self.names() {
            if let (Some(a), Some(b)) = (self.column(&name), reference.column(&name)) {
                out.insert(name, wasserstein1(&a, &b)?);
            }
        }
        Ok(out)
    }
}

/// Samples and scores `count` states from `source`.
pub fn score_source(
    source: &Source,
    n: usize,
    count: usize,
    blocks: &[BlockSpec],
    rng: &RngHandle,
) -> Result<Ensemble> {
    let reports = (0..count)
        .into_par_iter()
        .map(|i| {
            let psi = source.sample(n, &mut rng.derive_substream(i as u64))?;
            Ok(score_state(&psi, blocks)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble {
        label: source.label(),
        n,
        gate_count: source.gate_count(),
        reports,
    })
}
