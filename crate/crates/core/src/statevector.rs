//! Dense statevectors, exact propagation by Hermitian eigendecomposition and
//! first-order Trotter steps.
//!
//! Basis index bit `q` is the state of qubit `q`. Times are in inverse Hartree
//! and energies in Hartree (hbar = 1).

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::pauli::{PauliString, PauliSum};

/// Largest register the dense propagator is built for.
pub const MAX_PROPAGATOR_QUBITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("amplitude vector of length {0} is not 2^n for n >= 1")]
    BadLength(usize),
    #[error("Hamiltonian is not Hermitian (max imaginary weight {0:e})")]
    NonHermitian(f64),
    #[error("{0} qubits exceeds the dense propagator ceiling of {MAX_PROPAGATOR_QUBITS}")]
    TooLarge(usize),
    #[error("Trotter step count must be positive")]
    ZeroSteps,
    #[error("cannot normalise the zero vector")]
    ZeroNorm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, StateError> {
        let dim = 1usize << n_qubits;
        if n_qubits == 0 || index >= dim {
            return Err(StateError::BadLength(index));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn zero_state(n_qubits: usize) -> Result<Self, StateError> {
        Self::basis(n_qubits, 0)
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(StateError::BadLength(len));
        }
        Ok(Self { n_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self, StateError> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(StateError::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { n_qubits: self.n_qubits, amplitudes: self.amplitudes.iter().map(|a| a * factor).collect() }
    }

    /// `self + factor * other`
    pub fn axpy(&self, factor: Complex64, other: &StateVector) -> Result<Self, StateError> {
        self.check_dim(other)?;
        let amplitudes = self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a + factor * b).collect();
        Ok(Self { n_qubits: self.n_qubits, amplitudes })
    }

    fn check_dim(&self, other: &StateVector) -> Result<(), StateError> {
        if self.dim() != other.dim() {
            return Err(StateError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, StateError> {
        self.check_dim(other)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn apply_pauli_string(&self, p: &PauliString) -> Result<Self, StateError> {
        if p.n_qubits() != self.n_qubits {
            return Err(StateError::DimensionMismatch(1 << p.n_qubits(), self.dim()));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (b, a) in self.amplitudes.iter().enumerate() {
            let (row, c) = p.act_on_basis(b);
            out[row] = c * a;
        }
        Ok(Self { n_qubits: self.n_qubits, amplitudes: out })
    }

    /// `S|v>`; generally unnormalised.
    pub fn apply_pauli_sum(&self, s: &PauliSum) -> Result<Self, StateError> {
        if s.n_qubits() != self.n_qubits {
            return Err(StateError::DimensionMismatch(1 << s.n_qubits(), self.dim()));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (p, w) in s.iter() {
            for (b, a) in self.amplitudes.iter().enumerate() {
                let (row, c) = p.act_on_basis(b);
                out[row] += w * c * a;
            }
        }
        Ok(Self { n_qubits: self.n_qubits, amplitudes: out })
    }

    /// `<self|S|self>`.
    pub fn expectation(&self, s: &PauliSum) -> Result<Complex64, StateError> {
        self.inner(&self.apply_pauli_sum(s)?)
    }

    pub(crate) fn to_dvector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.amplitudes)
    }

    pub(crate) fn from_dvector(n_qubits: usize, v: DVector<Complex64>) -> Self {
        Self { n_qubits, amplitudes: v.as_slice().to_vec() }
    }
}

/// `S|v>` as a free function.
pub fn apply_pauli_sum(s: &PauliSum, v: &StateVector) -> Result<StateVector, StateError> {
    v.apply_pauli_sum(s)
}

/// `<u|v>` as a free function.
pub fn inner(u: &StateVector, v: &StateVector) -> Result<Complex64, StateError> {
    u.inner(v)
}

/// Spectral decomposition of a Hermitian Pauli sum, reused for any evolution time.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    n_qubits: usize,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl ExactPropagator {
    pub fn new(h: &PauliSum) -> Result<Self, StateError> {
        let max_im = h.iter().map(|(_, c)| c.im.abs()).fold(0.0, f64::max);
        if max_im > 1e-12 {
            return Err(StateError::NonHermitian(max_im));
        }
        if h.n_qubits() > MAX_PROPAGATOR_QUBITS {
            return Err(StateError::TooLarge(h.n_qubits()));
        }
        let (eigenvalues, eigenvectors) = hermitian_eigh(h.to_dense());
        Ok(Self { n_qubits: h.n_qubits(), eigenvalues, eigenvectors })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `k` is the eigenvector of `eigenvalues()[k]`.
    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// `V diag(e) V†`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&e| Complex64::new(e, 0.0)),
        ));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }

    /// `e^{-iHt}|v>`.
    pub fn evolve(&self, t: f64, v: &StateVector) -> Result<StateVector, StateError> {
        if v.n_qubits() != self.n_qubits {
            return Err(StateError::DimensionMismatch(1 << self.n_qubits, v.dim()));
        }
        let mut coeffs = self.eigenvectors.ad_mul(&v.to_dvector());
        for (c, &e) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= Complex64::from_polar(1.0, -e * t);
        }
        Ok(StateVector::from_dvector(self.n_qubits, &self.eigenvectors * coeffs))
    }
}

/// Free-function form of [`ExactPropagator::evolve`].
pub fn evolve_exact(p: &ExactPropagator, t: f64, v: &StateVector) -> Result<StateVector, StateError> {
    p.evolve(t, v)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending with matching columns.
pub(crate) fn hermitian_eigh(m: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let dim = m.nrows();
    let eig = nalgebra::linalg::SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(Ordering::Equal));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Term order used by [`trotter1_evolve`]: descending `|weight|`, ties by `(x_mask, z_mask)`.
pub fn trotter_order(h: &PauliSum) -> Vec<(PauliString, f64)> {
    let mut terms: Vec<(PauliString, f64)> = h.iter().map(|(p, c)| (*p, c.re)).collect();
    terms.sort_by(|a, b| {
        b.1.abs()
            .partial_cmp(&a.1.abs())
            .unwrap_or(Ordering::Equal)
            .then_with(|| (a.0.x_mask(), a.0.z_mask()).cmp(&(b.0.x_mask(), b.0.z_mask())))
    });
    terms
}

/// `e^{-i theta P}|v> = cos(theta)|v> - i sin(theta) P|v>` for a Hermitian string `P`.
pub fn apply_pauli_rotation(p: &PauliString, theta: f64, v: &mut [Complex64]) {
    let (s, c) = theta.sin_cos();
    if p.is_identity() {
        let phase = Complex64::new(c, -s);
        v.iter_mut().for_each(|a| *a *= phase);
        return;
    }
    let ms = Complex64::new(0.0, -s);
    let x = p.x_mask() as usize;
    let lowest = x & x.wrapping_neg();
    for b in 0..v.len() {
        if x == 0 {
            let (_, ph) = p.act_on_basis(b);
            v[b] *= c + ms * ph;
        } else if b & lowest == 0 {
            // P pairs b with b ^ x; visit each pair once.
            let b2 = b ^ x;
            let (_, ph1) = p.act_on_basis(b); // P|b> = ph1 |b2>
            let (_, ph2) = p.act_on_basis(b2); // P|b2> = ph2 |b>
            let a1 = v[b];
            let a2 = v[b2];
            v[b] = c * a1 + ms * ph2 * a2;
            v[b2] = c * a2 + ms * ph1 * a1;
        }
    }
}

/// `[prod_l e^{-i c_l P_l t/steps}]^steps |v>` with terms in [`trotter_order`].
pub fn trotter1_evolve(h: &PauliSum, t: f64, steps: usize, v: &StateVector) -> Result<StateVector, StateError> {
    if steps == 0 {
        return Err(StateError::ZeroSteps);
    }
    if h.n_qubits() != v.n_qubits() {
        return Err(StateError::DimensionMismatch(1 << h.n_qubits(), v.dim()));
    }
    let max_im = h.iter().map(|(_, c)| c.im.abs()).fold(0.0, f64::max);
    if max_im > 1e-12 {
        return Err(StateError::NonHermitian(max_im));
    }
    let terms = trotter_order(h);
    let dt = t / steps as f64;
    let mut amps = v.amplitudes().to_vec();
    for _ in 0..steps {
        for (p, c) in &terms {
            apply_pauli_rotation(p, c * dt, &mut amps);
        }
    }
    Ok(StateVector { n_qubits: v.n_qubits(), amplitudes: amps })
}
