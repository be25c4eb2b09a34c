//! Initial superpositions of Hamiltonian eigenstates inside a fixed
//! particle-number / spin sector.
//!
//! The eigensolve here only manufactures test inputs; the dynamics engine
//! receives the resulting state and nothing else.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ChemError;
use crate::pauli::PauliSum;
use crate::statevector::{hermitian_eigh, StateVector};

/// Eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

/// Amplitudes must satisfy `|sum |beta|^2 - 1| <= NORMALIZATION_TOLERANCE`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Fixed electron count and `2 S_z` (up minus down, spin-up on even qubits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub electrons: usize,
    pub ms2: i64,
}

impl Sector {
    pub fn contains(&self, basis_index: usize) -> bool {
        let up = (basis_index & 0x5555_5555_5555_5555).count_ones() as i64;
        let down = (basis_index & 0xAAAA_AAAA_AAAA_AAAA).count_ones() as i64;
        (up + down) as usize == self.electrons && up - down == self.ms2
    }
}

/// Which eigenstates to mix and with what amplitudes. Indices count from the
/// bottom of the sector spectrum; negative indices count from the top (`-1` is
/// the highest).
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    pub sector: Sector,
    pub eigen_indices: Vec<i64>,
    pub amplitudes: Vec<Complex64>,
}

/// Spectrum of a Hamiltonian restricted to one sector.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub n_qubits: usize,
    /// Full-register basis indices spanning the sector.
    pub basis: Vec<usize>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` pairs with `eigenvalues[k]`, expressed in `basis`.
    pub eigenvectors: DMatrix<Complex64>,
}

impl SectorSpectrum {
    pub fn new(h: &PauliSum, sector: Sector) -> Result<Self, ChemError> {
        let n_qubits = h.n_qubits();
        let basis: Vec<usize> = (0..1usize << n_qubits).filter(|&b| sector.contains(b)).collect();
        if basis.is_empty() {
            return Err(ChemError::EmptySector(sector.electrons, sector.ms2));
        }
        let mut pos = vec![usize::MAX; 1 << n_qubits];
        for (k, &b) in basis.iter().enumerate() {
            pos[b] = k;
        }
        let mut m = DMatrix::<Complex64>::zeros(basis.len(), basis.len());
        for (col, &b) in basis.iter().enumerate() {
            for (p, w) in h.iter() {
                let (row_b, ph) = p.act_on_basis(b);
                let row = pos[row_b];
                if row != usize::MAX {
                    m[(row, col)] += w * ph;
                }
                // Terms leaving the sector are dropped; a number-conserving H has none.
            }
        }
        let (eigenvalues, eigenvectors) = hermitian_eigh(m);
        Ok(Self { n_qubits, basis, eigenvalues, eigenvectors })
    }

    pub fn resolve(&self, index: i64) -> Result<usize, ChemError> {
        let len = self.eigenvalues.len() as i64;
        let k = if index < 0 { len + index } else { index };
        if k < 0 || k >= len {
            return Err(ChemError::EigenIndex(index, self.eigenvalues.len()));
        }
        Ok(k as usize)
    }

    /// Eigenvalue at a signed index.
    pub fn eigenvalue(&self, index: i64) -> Result<f64, ChemError> {
        Ok(self.eigenvalues[self.resolve(index)?])
    }

    /// Eigenstate at a signed index, embedded in the full register.
    pub fn eigenstate(&self, index: i64) -> Result<StateVector, ChemError> {
        let k = self.resolve(index)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n_qubits];
        for (r, &b) in self.basis.iter().enumerate() {
            amps[b] = self.eigenvectors[(r, k)];
        }
        Ok(StateVector::from_amplitudes(amps)?)
    }

    fn check_nondegenerate(&self, k: usize) -> Result<(), ChemError> {
        let e = self.eigenvalues[k];
        for (j, &other) in self.eigenvalues.iter().enumerate() {
            if j != k && (other - e).abs() < DEGENERACY_TOLERANCE {
                return Err(ChemError::Degenerate { index: k, energy: e });
            }
        }
        Ok(())
    }
}

/// `sum_j beta_j |e_j>` for the selected sector eigenstates.
pub fn build_initial_state(h: &PauliSum, spec: &Superposition) -> Result<StateVector, ChemError> {
    let spectrum = SectorSpectrum::new(h, spec.sector)?;
    build_initial_state_from(&spectrum, spec)
}

/// Same as [`build_initial_state`] with a precomputed spectrum.
pub fn build_initial_state_from(spectrum: &SectorSpectrum, spec: &Superposition) -> Result<StateVector, ChemError> {
    if spec.eigen_indices.len() != spec.amplitudes.len() || spec.amplitudes.is_empty() {
        return Err(ChemError::LengthMismatch {
            what: "amplitudes",
            got: spec.amplitudes.len(),
            expected: spec.eigen_indices.len(),
        });
    }
    let weight: f64 = spec.amplitudes.iter().map(|b| b.norm_sqr()).sum();
    if (weight - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(ChemError::NotNormalized(weight));
    }
    let mut resolved = Vec::with_capacity(spec.eigen_indices.len());
    for &i in &spec.eigen_indices {
        let k = spectrum.resolve(i)?;
        if resolved.contains(&k) {
            return Err(ChemError::DuplicateEigenIndex(i));
        }
        spectrum.check_nondegenerate(k)?;
        resolved.push(k);
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << spectrum.n_qubits];
    for (&k, beta) in resolved.iter().zip(&spec.amplitudes) {
        for (r, &b) in spectrum.basis.iter().enumerate() {
            amps[b] += beta * spectrum.eigenvectors[(r, k)];
        }
    }
    Ok(StateVector::from_amplitudes(amps)?.normalized()?)
}
