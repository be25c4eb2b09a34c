//! Time-evolved-basis dynamics: basis construction, overlap / Hamiltonian /
//! observable matrices (exact or shot-sampled), the coefficient ODE
//! `F da/dt = -i H a`, observable trajectories and basis diagnostics.

pub mod basis;
pub mod diagnostics;
pub mod dynamics;
pub mod matrices;
pub mod sampling;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::pauli::PauliError;
use crate::statevector::StateError;

pub use basis::{build_basis, build_basis_with, BasisSpec, Propagation};
pub use diagnostics::{lin_independence_report, ForbiddenTimes, LinIndependenceReport};
pub use dynamics::{
    fidelity, matrix_trajectory, min_error_overlap, observable_trajectory, pseudo_inverse, represented_state,
    solve_dynamics, solve_dynamics_with, step_count, CoefficientTrajectory, ObservableSeries, SolverOptions,
};
pub use matrices::{exact_matrices, quadratic_form, EstimandModel, EstimandTable, QasMatrices};
pub use sampling::{sample_matrices, sample_table, shot_sd, ShotModel};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("invalid time grid: {0}")]
    InvalidTime(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown observable {0:?}")]
    UnknownObservable(String),
    #[error("overlap matrix is singular: largest eigenvalue {0:e}")]
    SingularOverlap(f64),
    #[error("non-finite coefficients at step {step} (t = {time})")]
    NonFinite { step: usize, time: f64 },
    #[error("squared-Hamiltonian matrix not available")]
    MissingH2,
    #[error("matrices carry no Pauli-level estimands to resample")]
    MissingEstimands,
    #[error("shot count must be at least 1")]
    InvalidShots,
}
