//! Pure states and the reference families used as score baselines.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};
use crate::sampling::{haar_angles, sample_haar_unitary, RngHandle};

/// Normalization tolerance enforced by [`StateVector::new`].
pub const NORM_TOL: f64 = 1e-10;

/// Normalized amplitude vector of an `n`-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Validates `len = 2^n`, finiteness and unit norm.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "state not normalized (norm² = {norm})"
            )));
        }
        Ok(Self { n, amps })
    }

    /// Rescales an arbitrary non-zero vector to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument("cannot normalize zero vector".into()));
        }
        Ok(Self {
            n,
            amps: amps.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        if n == 0 || index >= 1 << n {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} invalid for {n} qubits"
            )));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Ok(Self { n, amps })
    }

    /// `|0…0⟩`.
    pub fn zero_state(n: usize) -> Result<Self> {
        Self::basis_state(n, 0)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|α_j|` for every basis index.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm()).collect()
    }

    /// `arg(α_j)` in `(-π, π]`.
    pub fn phases(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.arg()).collect()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "amplitude count {len} is not 2^n with n >= 1"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

fn require_at_least_two(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2 qubits, got {n}")));
    }
    Ok(())
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> Result<StateVector> {
    require_at_least_two(n)?;
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = C64::new(h, 0.0);
    amps[(1 << n) - 1] = C64::new(h, 0.0);
    Ok(StateVector { n, amps })
}

/// Equal superposition of the `n` single-excitation basis states.
pub fn w(n: usize) -> Result<StateVector> {
    require_at_least_two(n)?;
    let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![ZERO; 1 << n];
    for k in 0..n {
        amps[1 << (n - 1 - k)] = a;
    }
    Ok(StateVector { n, amps })
}

/// First column of a Haar unitary, i.e. `U_Haar |0…0⟩`.
pub fn haar_random_state(n: usize, rng: &mut RngHandle) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("need n >= 1".into()));
    }
    let u = sample_haar_unitary(1 << n, rng);
    Ok(StateVector { n, amps: u.column(0) })
}

/// `(I_A ⊗ U_B) 2^{-nA/2} Σ_a |a⟩_A |a⟩_B` with `A` the leading `n_a` qubits.
///
/// When `B` is larger than `A`, `|a⟩_B` is the `a`-th computational basis state
/// of `B`, i.e. the first `2^nA` basis states are used.
pub fn max_entangled_with(n: usize, n_a: usize, u_b: &crate::linalg::ComplexMat) -> Result<StateVector> {
    if n_a == 0 || n_a >= n {
        return Err(Error::InvalidArgument(format!(
            "subsystem size {n_a} must satisfy 1 <= nA < n = {n}"
        )));
    }
    let n_b = n - n_a;
    if n_a > n_b {
        return Err(Error::InvalidArgument(format!(
            "subsystem A ({n_a} qubits) larger than B ({n_b}) cannot be maximally entangled"
        )));
    }
    let dim_a = 1usize << n_a;
    let dim_b = 1usize << n_b;
    if u_b.dims() != (dim_b, dim_b) {
        return Err(Error::Dimension(format!(
            "U_B must be {dim_b}x{dim_b}, got {:?}",
            u_b.dims()
        )));
    }
    let norm = 1.0 / (dim_a as f64).sqrt();
    let mut amps = vec![ZERO; 1 << n];
    for a in 0..dim_a {
        // U_B |a⟩ is column a of U_B.
        for b in 0..dim_b {
            amps[a * dim_b + b] = u_b[(b, a)] * norm;
        }
    }
    Ok(StateVector { n, amps })
}

/// Randomized maximally-entangled bipartite state with a Haar `U_B`.
pub fn max_entangled(n: usize, n_a: usize, rng: &mut RngHandle) -> Result<StateVector> {
    if n_a == 0 || n_a >= n || n_a > n - n_a {
        // validated again below; checked first so no randomness is consumed
        return max_entangled_with(n, n_a, &crate::linalg::ComplexMat::identity(1));
    }
    let u_b = sample_haar_unitary(1 << (n - n_a), rng);
    max_entangled_with(n, n_a, &u_b)
}

/// Flat magnitudes `2^{-n/2}` with independent uniform phases.
pub fn uniform_amplitude(n: usize, rng: &mut RngHandle) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("need n >= 1".into()));
    }
    let r = 1.0 / ((1usize << n) as f64).sqrt();
    let amps = (0..1usize << n)
        .map(|_| C64::from_polar(r, rng.angle()))
        .collect();
    Ok(StateVector { n, amps })
}

/// Tensor product of Bloch-sphere Haar single-qubit states
/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` with `cos θ` uniform.
pub fn product_state(n: usize, rng: &mut RngHandle) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("need n >= 1".into()));
    }
    let mut amps = vec![ONE];
    for _ in 0..n {
        let e = haar_angles(rng);
        let q0 = C64::new((e.theta / 2.0).cos(), 0.0);
        let q1 = C64::from_polar((e.theta / 2.0).sin(), e.phi);
        amps = amps.iter().flat_map(|&a| [a * q0, a * q1]).collect();
    }
    Ok(StateVector { n, amps })
}
