use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::pauli::PauliSum;
use crate::statevector::{trotter1_evolve, ExactPropagator, StateVector};

/// How `e^{-iHs}` is applied when preparing basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Propagation {
    Exact,
    /// First-order Trotter product with `steps` slices per basis state.
    Trotter1 { steps: usize },
}

/// Parameter times `0 = s_0 < s_1 < ...` and the propagation mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub times: Vec<f64>,
    pub propagation: Propagation,
}

impl BasisSpec {
    pub fn exact(times: Vec<f64>) -> Self {
        Self { times, propagation: Propagation::Exact }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        match self.times.first() {
            None => return Err(EngineError::InvalidBasis("no parameter times".into())),
            Some(&s0) if s0 != 0.0 => {
                return Err(EngineError::InvalidBasis(format!("first parameter time must be 0, got {s0}")))
            }
            _ => {}
        }
        for w in self.times.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(EngineError::InvalidBasis(format!("times must increase strictly: {} then {}", w[0], w[1])));
            }
        }
        if let Propagation::Trotter1 { steps: 0 } = self.propagation {
            return Err(EngineError::InvalidBasis("Trotter step count must be positive".into()));
        }
        Ok(())
    }

    /// `sum_{j,k} |s_j - s_k|`.
    pub fn total_time_offsets(&self) -> f64 {
        self.times.iter().flat_map(|a| self.times.iter().map(move |b| (a - b).abs())).sum()
    }
}

/// `|psi_j> = U(s_j)|psi_0>`; `|psi_0>` is returned first.
pub fn build_basis(psi0: &StateVector, h: &PauliSum, spec: &BasisSpec) -> Result<Vec<StateVector>, EngineError> {
    let propagator = match spec.propagation {
        Propagation::Exact if spec.len() > 1 => Some(ExactPropagator::new(h)?),
        _ => None,
    };
    build_basis_with(psi0, h, propagator.as_ref(), spec)
}

/// [`build_basis`] reusing an existing propagator for exact mode.
pub fn build_basis_with(
    psi0: &StateVector,
    h: &PauliSum,
    propagator: Option<&ExactPropagator>,
    spec: &BasisSpec,
) -> Result<Vec<StateVector>, EngineError> {
    spec.validate()?;
    if h.n_qubits() != psi0.n_qubits() {
        return Err(EngineError::DimensionMismatch(format!(
            "state has {} qubits, Hamiltonian {}",
            psi0.n_qubits(),
            h.n_qubits()
        )));
    }
    let mut out = Vec::with_capacity(spec.len());
    out.push(psi0.clone());
    for &s in &spec.times[1..] {
        let state = match spec.propagation {
            Propagation::Exact => match propagator {
                Some(p) => p.evolve(s, psi0)?,
                None => ExactPropagator::new(h)?.evolve(s, psi0)?,
            },
            Propagation::Trotter1 { steps } => trotter1_evolve(h, s, steps, psi0)?,
        };
        out.push(state);
    }
    Ok(out)
}
