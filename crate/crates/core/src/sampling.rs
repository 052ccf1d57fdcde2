//! Seeded random streams, Haar unitaries and Haar single-qubit rotation angles.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ComplexMat, C64, ZERO};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer (Steele, Lea & Flood constants).
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A reproducible random stream identified by `(seed, stream)`.
///
/// Draws come from ChaCha8 keyed by `seed` with `stream` as its stream id, so a
/// given pair produces the same sequence on every platform. Child streams from
/// [`RngHandle::derive_substream`] depend only on the parent's identity and the
/// index, never on how much of the parent has been consumed.
#[derive(Debug, Clone)]
pub struct RngHandle {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngHandle {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Fresh child stream `mix(stream, index)` under the same seed.
    pub fn derive_substream(&self, index: u64) -> RngHandle {
        let child = mix64(self.stream ^ mix64(index.wrapping_add(GOLDEN_GAMMA)));
        RngHandle::with_stream(self.seed, child)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Standard normal via Box–Muller (one of the pair is discarded).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }

    /// Complex Gaussian with `E|z|² = 1`, both parts from one Box–Muller pair.
    pub fn complex_gaussian(&mut self) -> C64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-u1.ln()).sqrt();
        let t = 2.0 * PI * u2;
        C64::new(r * t.cos(), r * t.sin())
    }

    /// Uniform integer in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Uniform angle on `[0, 2π)`.
    pub fn angle(&mut self) -> f64 {
        2.0 * PI * self.uniform()
    }
}

impl RngCore for RngHandle {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Free-function form of [`RngHandle::derive_substream`].
pub fn derive_substream(rng: &RngHandle, index: u64) -> RngHandle {
    rng.derive_substream(index)
}

/// ZXZ Euler angles of a single-qubit rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub omega: f64,
}

/// Angles whose rotation `R_Z(φ) R_X(θ) R_Z(ω)` is Haar distributed:
/// `φ, ω` uniform on `[0, 2π)` and `cos θ` uniform on `[-1, 1]`.
pub fn haar_angles(rng: &mut RngHandle) -> EulerAngles {
    let phi = rng.angle();
    let omega = rng.angle();
    let u = 2.0 * rng.uniform() - 1.0;
    EulerAngles {
        phi,
        theta: u.acos(),
        omega,
    }
}

/// Haar-random unitary of size `dim` (Mezzadri's recipe).
///
/// A Ginibre matrix is QR-factorized with Householder reflections and `Q` is
/// multiplied by `diag(r_ii / |r_ii|)`, which removes the phase ambiguity of
/// the factorization.
pub fn sample_haar_unitary(dim: usize, rng: &mut RngHandle) -> ComplexMat {
    assert!(dim >= 1, "Haar unitary needs dim >= 1");
    // Column-major working copy: col j occupies a[j*dim..(j+1)*dim].
    let mut a: Vec<C64> = vec![ZERO; dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            a[c * dim + r] = rng.complex_gaussian();
        }
    }

    let mut reflectors: Vec<Vec<C64>> = Vec::with_capacity(dim);
    let mut diag_phase: Vec<C64> = Vec::with_capacity(dim);
    for k in 0..dim {
        let x = &a[k * dim + k..(k + 1) * dim];
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let x0 = x[0];
        let phase0 = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase0 * norm_x;
        let mut v: Vec<C64> = x.to_vec();
        v[0] -= alpha;
        let v_norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sq > 0.0 {
            let scale = 2.0 / v_norm_sq;
            for j in k..dim {
                let col = &mut a[j * dim + k..(j + 1) * dim];
                let proj: C64 = v.iter().zip(col.iter()).map(|(vi, ci)| vi.conj() * ci).sum();
                let f = proj * scale;
                for (ci, vi) in col.iter_mut().zip(&v) {
                    *ci -= vi * f;
                }
            }
            for z in v.iter_mut() {
                *z *= scale.sqrt();
            }
        } else {
            v.iter_mut().for_each(|z| *z = ZERO);
        }
        let rkk = a[k * dim + k];
        diag_phase.push(if rkk.norm() > 0.0 {
            rkk / rkk.norm()
        } else {
            C64::new(1.0, 0.0)
        });
        reflectors.push(v);
    }

    // Q = H_0 H_1 ... H_{d-1}; accumulate right-to-left on the identity.
    let mut q: Vec<C64> = vec![ZERO; dim * dim];
    for i in 0..dim {
        q[i * dim + i] = C64::new(1.0, 0.0);
    }
    for k in (0..dim).rev() {
        let v = &reflectors[k];
        for j in 0..dim {
            let col = &mut q[j * dim + k..(j + 1) * dim];
            let proj: C64 = v.iter().zip(col.iter()).map(|(vi, ci)| vi.conj() * ci).sum();
            for (ci, vi) in col.iter_mut().zip(v) {
                *ci -= vi * proj;
            }
        }
    }

    let mut u = ComplexMat::zeros(dim, dim);
    for c in 0..dim {
        for r in 0..dim {
            u[(r, c)] = q[c * dim + r] * diag_phase[c];
        }
    }
    u
}
