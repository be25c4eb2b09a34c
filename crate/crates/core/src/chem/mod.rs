//! Molecular integrals, the electronic Hamiltonian and chemistry observables.

pub mod fcidump;
pub mod hamiltonian;
pub mod initial;
pub mod observables;

use thiserror::Error;

use crate::pauli::PauliError;
use crate::statevector::StateError;

pub use fcidump::{
    parse_fcidump, parse_fcidump_bytes, parse_split_integrals, parse_split_integrals_bytes, IntegralError,
    IntegralSet, SplitIntegrals,
};
pub use hamiltonian::{
    build_electronic_hamiltonian, one_body_operator, orbital_population, particle_number, spin_orbital,
    two_body_operator,
};
pub use initial::{build_initial_state, build_initial_state_from, Sector, SectorSpectrum, Superposition};
pub use observables::{build_observables, population_label, ObservableSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChemError {
    #[error(transparent)]
    Integrals(#[from] IntegralError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("energy decomposition requested but no kinetic/potential split integrals were loaded")]
    MissingSplit,
    #[error("unknown observable {0:?}")]
    UnknownObservable(String),
    #[error("{what}: got {got}, expected {expected}")]
    LengthMismatch { what: &'static str, got: usize, expected: usize },
    #[error("sector with {0} electrons and 2Sz={1} is empty")]
    EmptySector(usize, i64),
    #[error("eigen-index {0} out of range for a sector of dimension {1}")]
    EigenIndex(i64, usize),
    #[error("eigen-index {0} selected twice")]
    DuplicateEigenIndex(i64),
    #[error("eigenvalue {energy} (index {index}) is degenerate")]
    Degenerate { index: usize, energy: f64 },
    #[error("amplitudes have total weight {0}, expected 1")]
    NotNormalized(f64),
}
