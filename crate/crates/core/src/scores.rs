//! Magnitude, phase and entanglement diversity scores of a pure state.
//!
//! For qubit `k` the basis indices split into the sectors `S₀ᵏ` (bit `k` is 0)
//! and `S₁ᵏ` (bit `k` is 1); index `j ∈ S₀ᵏ` is paired with `j + p_k` where
//! `p_k = 2^(n-1-k)`. An amplitude counts as supported when `|α_j| > ε`.
//!
//! Per-qubit scores (MS, MCS, PS, PCS) are reported per `k` and as their mean.
//! Degenerate cases: PS is 0 when no pair is supported on both sides, PCS is 0
//! when either sector has empty support. All entropies are in bits.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{reduced_density, validate_block, C64};
use crate::states::StateVector;

/// Support threshold ε on `|α_j|`.
pub const SUPPORT_EPS: f64 = 1e-10;

/// Fixed score names, in output column order.
pub const SCORE_NAMES: [&str; 8] = ["ms", "mcs", "mds", "ps", "pcs", "pvs", "q", "s"];

/// Sector bookkeeping for one qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorIndex {
    pub k: usize,
    pub stride: usize,
    pub sector0: Vec<usize>,
    pub sector1: Vec<usize>,
    pub support: Vec<usize>,
    pub pair_support: Vec<usize>,
    pub n_support: usize,
    pub n_support0: usize,
    pub n_support1: usize,
    pub n_pairs: usize,
}

impl SectorIndex {
    pub fn new(psi: &StateVector, k: usize) -> Result<Self> {
        let n = psi.num_qubits();
        check_qubit(k, n)?;
        let stride = 1usize << (n - 1 - k);
        let amps = psi.amplitudes();
        let supported = |j: usize| amps[j].norm() > SUPPORT_EPS;
        let sector0: Vec<usize> = (0..amps.len()).filter(|j| j & stride == 0).collect();
        let sector1: Vec<usize> = sector0.iter().map(|j| j + stride).collect();
        let support: Vec<usize> = (0..amps.len()).filter(|&j| supported(j)).collect();
        let pair_support: Vec<usize> = sector0
            .iter()
            .copied()
            .filter(|&j| supported(j) && supported(j + stride))
            .collect();
        let n_support0 = sector0.iter().filter(|&&j| supported(j)).count();
        let n_support1 = sector1.iter().filter(|&&j| supported(j)).count();
        Ok(Self {
            k,
            stride,
            n_support: support.len(),
            n_pairs: pair_support.len(),
            sector0,
            sector1,
            support,
            pair_support,
            n_support0,
            n_support1,
        })
    }
}

fn check_qubit(k: usize, n: usize) -> Result<()> {
    if k >= n {
        return Err(Error::QubitOutOfRange { index: k, n });
    }
    Ok(())
}

// Iterates (j, j + p_k) over the pairs with j in S₀ᵏ.
fn sector_pairs(n: usize, k: usize) -> impl Iterator<Item = (usize, usize)> {
    let stride = 1usize << (n - 1 - k);
    (0..1usize << n)
        .filter(move |j| j & stride == 0)
        .map(move |j| (j, j + stride))
}

fn unit_phasor(z: C64) -> C64 {
    z / z.norm()
}

/// Magnitude score `½(1 + Σ_{j∈S₀ᵏ} |α_{j+p}|² − |α_j|²)`.
pub fn ms(psi: &StateVector, k: usize) -> Result<f64> {
    let n = psi.num_qubits();
    check_qubit(k, n)?;
    let a = psi.amplitudes();
    let diff: f64 = sector_pairs(n, k)
        .map(|(j0, j1)| a[j1].norm_sqr() - a[j0].norm_sqr())
        .sum();
    Ok(0.5 * (1.0 + diff))
}

/// Magnitude correlation score `2^{-(n-2)} (Σ_{S₀ᵏ}|α|)(Σ_{S₁ᵏ}|α|)`.
pub fn mcs(psi: &StateVector, k: usize) -> Result<f64> {
    let n = psi.num_qubits();
    check_qubit(k, n)?;
    let a = psi.amplitudes();
    let (s0, s1) = sector_pairs(n, k).fold((0.0, 0.0), |(s0, s1), (j0, j1)| {
        (s0 + a[j0].norm(), s1 + a[j1].norm())
    });
    Ok(s0 * s1 * 4.0 / (1usize << n) as f64)
}

/// Magnitude dimensionality score `(1/D)(Σ|α|⁴)^{-1}`.
pub fn mds(psi: &StateVector) -> f64 {
    let ipr: f64 = psi.amplitudes().iter().map(|z| z.norm_sqr().powi(2)).sum();
    1.0 / (psi.dim() as f64 * ipr)
}

/// Circular distance between two angles, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % TAU;
    d.min(TAU - d)
}

/// Phase score: mean circular phase distance over supported pairs, divided by π.
pub fn ps(psi: &StateVector, k: usize) -> Result<f64> {
    let n = psi.num_qubits();
    check_qubit(k, n)?;
    let a = psi.amplitudes();
    let (sum, count) = sector_pairs(n, k)
        .filter(|&(j0, j1)| a[j0].norm() > SUPPORT_EPS && a[j1].norm() > SUPPORT_EPS)
        .fold((0.0, 0usize), |(s, c), (j0, j1)| {
            (s + circular_distance(a[j0].arg(), a[j1].arg()), c + 1)
        });
    if count == 0 {
        return Ok(0.0);
    }
    Ok(sum / (PI * count as f64))
}

/// Phase correlation score `1 − |⟨cos(φ_i − φ_j)⟩|` over supported cross-sector pairs.
pub fn pcs(psi: &StateVector, k: usize) -> Result<f64> {
    let n = psi.num_qubits();
    check_qubit(k, n)?;
    let a = psi.amplitudes();
    let (mut z0, mut z1) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    let (mut n0, mut n1) = (0usize, 0usize);
    for (j0, j1) in sector_pairs(n, k) {
        if a[j0].norm() > SUPPORT_EPS {
            z0 += unit_phasor(a[j0]);
            n0 += 1;
        }
        if a[j1].norm() > SUPPORT_EPS {
            z1 += unit_phasor(a[j1]);
            n1 += 1;
        }
    }
    if n0 == 0 || n1 == 0 {
        return Ok(0.0);
    }
    // Σ_i Σ_j cos(φ_i − φ_j) = Re(Z₀ · conj(Z₁))
    let mean_cos = (z0 * z1.conj()).re / (n0 as f64 * n1 as f64);
    Ok(1.0 - mean_cos.abs())
}

/// Phase variance score `1 − |⟨e^{iφ_j}⟩|` over the global support.
pub fn pvs(psi: &StateVector) -> f64 {
    let (z, count) = psi
        .amplitudes()
        .iter()
        .filter(|z| z.norm() > SUPPORT_EPS)
        .fold((C64::new(0.0, 0.0), 0usize), |(acc, c), &z| (acc + unit_phasor(z), c + 1));
    if count == 0 {
        return 0.0;
    }
    1.0 - z.norm() / count as f64
}

/// Meyer–Wallach measure `2[1 − (1/n) Σ_k Tr ρ_k²]`.
pub fn q_mw(psi: &StateVector) -> f64 {
    let n = psi.num_qubits();
    let mean_purity = (0..n)
        .map(|k| reduced_density(psi, &[k]).expect("valid qubit").purity())
        .sum::<f64>()
        / n as f64;
    2.0 * (1.0 - mean_purity)
}

/// Mean single-qubit von Neumann entropy in bits.
pub fn s_vn(psi: &StateVector) -> f64 {
    let n = psi.num_qubits();
    (0..n)
        .map(|k| {
            reduced_density(psi, &[k])
                .expect("valid qubit")
                .von_neumann_entropy()
        })
        .sum::<f64>()
        / n as f64
}

/// Rényi-2 entropy of a block per qubit in the block: `−log₂(Tr ρ_A²)/|A|`.
pub fn s2_block(psi: &StateVector, block: &[usize]) -> Result<f64> {
    let n = psi.num_qubits();
    if block.is_empty() || block.len() >= n {
        return Err(Error::BlockSize {
            got: block.len(),
            min: 1,
            max: n.saturating_sub(1),
        });
    }
    validate_block(block, n)?;
    let rho = reduced_density(psi, block)?;
    Ok(-rho.purity().log2() / block.len() as f64)
}

/// Named qubit block for Rényi-2 evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    pub label: String,
    pub qubits: Vec<usize>,
}

impl BlockSpec {
    pub fn new(label: impl Into<String>, qubits: impl Into<Vec<usize>>) -> Self {
        Self {
            label: label.into(),
            qubits: qubits.into(),
        }
    }
}

/// All scores of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub ms: Vec<f64>,
    pub mcs: Vec<f64>,
    pub ps: Vec<f64>,
    pub pcs: Vec<f64>,
    pub mds: f64,
    pub pvs: f64,
    pub q: f64,
    pub s: f64,
    /// `(label, S₂)` in the order the blocks were requested.
    pub s2: Vec<(String, f64)>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

impl ScoreReport {
    pub fn ms_mean(&self) -> f64 {
        mean(&self.ms)
    }

    pub fn mcs_mean(&self) -> f64 {
        mean(&self.mcs)
    }

    pub fn ps_mean(&self) -> f64 {
        mean(&self.ps)
    }

    pub fn pcs_mean(&self) -> f64 {
        mean(&self.pcs)
    }

    pub fn s2(&self, label: &str) -> Option<f64> {
        self.s2.iter().find(|(l, _)| l == label).map(|&(_, v)| v)
    }

    /// Scalar values keyed by output name: the eight fixed scores followed by
    /// one `S₂` entry per block.
    pub fn values(&self) -> Vec<(&str, f64)> {
        let fixed = [
            self.ms_mean(),
            self.mcs_mean(),
            self.mds,
            self.ps_mean(),
            self.pcs_mean(),
            self.pvs,
            self.q,
            self.s,
        ];
        SCORE_NAMES
            .iter()
            .copied()
            .zip(fixed)
            .chain(self.s2.iter().map(|(l, v)| (l.as_str(), *v)))
            .collect()
    }

    /// Looks up any value returned by [`ScoreReport::values`].
    pub fn get(&self, name: &str) -> Option<f64> {
        self.values()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v)
    }
}

/// Evaluates every score; `blocks` selects the Rényi-2 blocks.
pub fn score_state(psi: &StateVector, blocks: &[BlockSpec]) -> Result<ScoreReport> {
    let n = psi.num_qubits();
    let per_qubit = |f: fn(&StateVector, usize) -> Result<f64>| -> Result<Vec<f64>> {
        (0..n).map(|k| f(psi, k)).collect()
    };
    let s2 = blocks
        .iter()
        .map(|b| Ok((b.label.clone(), s2_block(psi, &b.qubits)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreReport {
        ms: per_qubit(ms)?,
        mcs: per_qubit(mcs)?,
        ps: per_qubit(ps)?,
        pcs: per_qubit(pcs)?,
        mds: mds(psi),
        pvs: pvs(psi),
        q: q_mw(psi),
        s: s_vn(psi),
        s2,
    })
}
