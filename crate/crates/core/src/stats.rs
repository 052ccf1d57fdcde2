//! Two-sample statistics: kernel MMD with permutation p-values on unitary
//! ensembles, and the 1-D Wasserstein distance between score samples.

use alloc::vec::Vec;
use core::cmp::Ordering;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::linalg::ComplexMat;
use crate::sampling::RngHandle;

/// Gauge-fixed unitary flattened to interleaved `[re, im, re, im, …]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedSample(Vec<f64>);

impl EmbeddedSample {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Removes the global phase by rotating the largest-magnitude entry (first in
/// row-major order on ties) onto the positive real axis, then flattens.
pub fn embed_unitary(u: &ComplexMat) -> EmbeddedSample {
    let data = u.as_slice();
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in data.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best_mag {
            best = i;
            best_mag = m;
        }
    }
    let pivot = data[best];
    let gauge = if pivot.norm() > 0.0 {
        pivot.conj() / pivot.norm()
    } else {
        crate::linalg::ONE
    };
    let mut v = Vec::with_capacity(2 * data.len());
    for z in data {
        let w = z * gauge;
        v.push(w.re);
        v.push(w.im);
    }
    EmbeddedSample(v)
}

/// Outcome of [`mmd_test`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmdResult {
    /// Unbiased MMD² estimate.
    pub statistic: f64,
    /// `(1 + #{permuted ≥ observed}) / (1 + n_perm)`.
    pub p_value: f64,
    pub m: usize,
    pub n_perm: usize,
    /// Kernel bandwidth σ (the kernel is `exp(−‖x−y‖²/(2σ²))`).
    pub bandwidth: f64,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Median of a non-empty slice (mean of the middle two for even lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

// Unbiased MMD² of the split (group, rest) over a precomputed kernel matrix.
fn unbiased_mmd2(kernel: &[f64], total: usize, group: &[usize], rest: &[usize]) -> f64 {
    let k = |i: usize, j: usize| kernel[i * total + j];
    let within = |idx: &[usize]| -> f64 {
        let mut s = 0.0;
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                s += k(i, j);
            }
        }
        2.0 * s / (idx.len() * (idx.len() - 1)) as f64
    };
    let cross: f64 = group
        .iter()
        .map(|&i| rest.iter().map(|&j| k(i, j)).sum::<f64>())
        .sum();
    within(group) + within(rest) - 2.0 * cross / (group.len() * rest.len()) as f64
}

/// Gaussian-kernel MMD two-sample test with a label-permutation p-value.
///
/// Bandwidth follows the median heuristic: `σ²` is half the median pairwise
/// squared distance of the pooled sample. Permutation `r` shuffles with
/// `rng.derive_substream(r)`. The pooled sample is put into a canonical order
/// first, so swapping `xs` and `ys` gives the same statistic and p-value.
pub fn mmd_test(
    xs: &[EmbeddedSample],
    ys: &[EmbeddedSample],
    n_perm: usize,
    rng: &RngHandle,
) -> Result<MmdResult> {
    if xs.len() < 2 || ys.len() < 2 {
        return Err(Error::InvalidArgument(
            "mmd_test needs at least two samples per ensemble".into(),
        ));
    }
    let dim = xs[0].len();
    if xs.iter().chain(ys).any(|s| s.len() != dim) {
        return Err(Error::Dimension("embedded samples differ in length".into()));
    }

    let mut pooled: Vec<(&[f64], bool)> = xs
        .iter()
        .map(|s| (s.as_slice(), true))
        .chain(ys.iter().map(|s| (s.as_slice(), false)))
        .collect();
    pooled.sort_by(|a, b| lexicographic(a.0, b.0));
    let total = pooled.len();

    let mut d2 = alloc::vec![0.0; total * total];
    let mut upper = Vec::with_capacity(total * (total - 1) / 2);
    for i in 0..total {
        for j in (i + 1)..total {
            let d = squared_distance(pooled[i].0, pooled[j].0);
            d2[i * total + j] = d;
            d2[j * total + i] = d;
            upper.push(d);
        }
    }
    let small = xs.len().min(ys.len());
    if upper.iter().all(|&d| d == 0.0) {
        return Ok(MmdResult {
            statistic: 0.0,
            p_value: 1.0,
            m: small,
            n_perm,
            bandwidth: 0.0,
        });
    }
    let mut med = median(&upper);
    if med <= 0.0 {
        // More than half the pairs coincide; fall back to the positive distances.
        let positive: Vec<f64> = upper.iter().copied().filter(|&d| d > 0.0).collect();
        med = median(&positive);
    }
    let sigma_sq = med / 2.0;
    let kernel: Vec<f64> = d2.iter().map(|d| (-d / (2.0 * sigma_sq)).exp()).collect();

    // The smaller group (or, at equal sizes, the one holding the canonically
    // first point) plays the "first" block, so argument order does not matter.
    let first_tag = match xs.len().cmp(&ys.len()) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => pooled[0].1,
    };
    let group: Vec<usize> = (0..total).filter(|&i| pooled[i].1 == first_tag).collect();
    let rest: Vec<usize> = (0..total).filter(|&i| pooled[i].1 != first_tag).collect();
    let observed = unbiased_mmd2(&kernel, total, &group, &rest);

    let mut exceed = 0usize;
    let mut order: Vec<usize> = (0..total).collect();
    for r in 0..n_perm {
        let mut sub = rng.derive_substream(r as u64);
        order.iter_mut().enumerate().for_each(|(i, o)| *o = i);
        order.shuffle(&mut sub);
        let stat = unbiased_mmd2(&kernel, total, &order[..small], &order[small..]);
        if stat >= observed {
            exceed += 1;
        }
    }
    Ok(MmdResult {
        statistic: observed,
        p_value: (1 + exceed) as f64 / (1 + n_perm) as f64,
        m: small,
        n_perm,
        bandwidth: sigma_sq.sqrt(),
    })
}

/// Empirical 1-D Wasserstein-1 distance.
///
/// Equal sizes use the matched order statistics; otherwise the area between
/// the two empirical CDFs is integrated exactly.
pub fn wasserstein1(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("wasserstein1 needs non-empty samples"));
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    if sa.len() == sb.len() {
        let total: f64 = sa.iter().zip(&sb).map(|(x, y)| (x - y).abs()).sum();
        return Ok(total / sa.len() as f64);
    }
    let mut all: Vec<f64> = sa.iter().chain(&sb).copied().collect();
    all.sort_by(f64::total_cmp);
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut area = 0.0;
    for w in all.windows(2) {
        let x = w[0];
        while ia < sa.len() && sa[ia] <= x {
            ia += 1;
        }
        while ib < sb.len() && sb[ib] <= x {
            ib += 1;
        }
        area += (ia as f64 / na - ib as f64 / nb).abs() * (w[1] - w[0]);
    }
    Ok(area)
}
