//! Dense complex matrices and the reductions needed for entanglement measures.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::states::StateVector;

pub type C64 = Complex<f64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerance used when validating Hermiticity of density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues below this magnitude are treated as exact zeros in entropies.
pub const EIGEN_CLAMP: f64 = 1e-12;

const JACOBI_OFFDIAG_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMat) -> ComplexMat {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = ComplexMat::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    let dst = (i * other.rows + k) * cols + j * other.cols;
                    for (l, &b) in other.row(k).iter().enumerate() {
                        out.data[dst + l] = a * b;
                    }
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &ComplexMat) -> Result<ComplexMat> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (d, &b) in dst.iter_mut().zip(other.row(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMat {
        let mut out = ComplexMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> ComplexMat {
        ComplexMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_F`; matrices must have equal shape.
    pub fn frobenius_distance(&self, other: &ComplexMat) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(Error::Dimension(format!(
                "{:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.dagger().matmul(self).expect("square by construction");
        gram.frobenius_distance(&ComplexMat::identity(self.cols))
            .expect("same shape")
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for ComplexMat {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Hermitian, unit-trace matrix describing a (reduced) quantum state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMat,
}

impl DensityMatrix {
    /// Validates squareness and Hermiticity to [`HERMITIAN_TOL`].
    pub fn new(mat: ComplexMat) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Dimension(format!(
                "density matrix must be square, got {:?}",
                mat.dims()
            )));
        }
        let defect = mat.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { mat })
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(amps: &[C64]) -> Self {
        let d = amps.len();
        let mut mat = ComplexMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] = amps[i] * amps[j].conj();
            }
        }
        Self { mat }
    }

    /// `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMat::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMat {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// `Tr(ρ²)`, computed as the squared Frobenius norm (ρ is Hermitian).
    pub fn purity(&self) -> f64 {
        self.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Spectrum in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        jacobi_eigenvalues(&self.mat)
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > EIGEN_CLAMP)
            .map(|l| -l * l.log2())
            .sum()
    }
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(mat: &ComplexMat) -> Result<Vec<f64>> {
    if !mat.is_square() {
        return Err(Error::Dimension(format!("{:?} is not square", mat.dims())));
    }
    let defect = mat.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(jacobi_eigenvalues(mat))
}

// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
// A_pq, then applies the real symmetric rotation that annihilates it.
fn jacobi_eigenvalues(mat: &ComplexMat) -> Vec<f64> {
    let n = mat.rows();
    let mut a = mat.clone();
    // Symmetrize so round-off in the input cannot leak imaginary diagonal parts.
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_OFFDIAG_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = D·R with D = diag(1, conj(phase)) on (p, q).
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = phase.conj() * (-s);
                let g_qq = phase.conj() * c;
                // A ← A·G (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                // A ← G†·A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}

/// Checks that `block` is a non-empty list of distinct qubit indices below `n`.
pub(crate) fn validate_block(block: &[usize], n: usize) -> Result<()> {
    if block.is_empty() {
        return Err(Error::BlockSize {
            got: 0,
            min: 1,
            max: n,
        });
    }
    for (i, &q) in block.iter().enumerate() {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        if block[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Partial trace of `|ψ⟩⟨ψ|` over every qubit outside `block`.
///
/// The reduced index uses the order given in `block`: `block[0]` is the most
/// significant qubit of the result.
pub fn reduced_density(psi: &StateVector, block: &[usize]) -> Result<DensityMatrix> {
    let n = psi.num_qubits();
    validate_block(block, n)?;
    let m = block.len();
    let weight = |q: usize| 1usize << (n - 1 - q);

    let block_offsets: Vec<usize> = (0..1usize << m)
        .map(|a| {
            (0..m)
                .filter(|t| a >> (m - 1 - t) & 1 == 1)
                .map(|t| weight(block[t]))
                .sum()
        })
        .collect();
    let env: Vec<usize> = (0..n).filter(|q| !block.contains(q)).collect();
    let env_offsets: Vec<usize> = (0..1usize << env.len())
        .map(|e| {
            (0..env.len())
                .filter(|t| e >> (env.len() - 1 - t) & 1 == 1)
                .map(|t| weight(env[t]))
                .sum()
        })
        .collect();

    let amps = psi.amplitudes();
    let dim = 1usize << m;
    let mut rho = ComplexMat::zeros(dim, dim);
    for a in 0..dim {
        for b in a..dim {
            let (oa, ob) = (block_offsets[a], block_offsets[b]);
            let v: C64 = env_offsets
                .iter()
                .map(|&oe| amps[oa + oe] * amps[ob + oe].conj())
                .sum();
            rho[(a, b)] = v;
            rho[(b, a)] = v.conj();
        }
    }
    Ok(DensityMatrix { mat: rho })
}

/// Purity `Tr(ρ²)` of a density matrix.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}
