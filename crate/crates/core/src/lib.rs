//! Time-evolved-basis quantum dynamics emulation.
//!
//! The pipeline: integrals from an FCIDUMP file become a Jordan-Wigner qubit
//! Hamiltonian ([`chem`]), an initial superposition is propagated to a small
//! set of basis states ([`statevector`], [`engine::build_basis`]), overlap and
//! operator matrices are formed exactly or with shot noise
//! ([`engine::exact_matrices`], [`engine::sample_matrices`]) and the
//! coefficient ODE `F da/dt = -i H a` is integrated
//! ([`engine::solve_dynamics`]). [`resource`] costs the quantum side and
//! [`harness`] drives configured experiments.
//!
//! Units are atomic: energies in Hartree, times in inverse Hartree.

// Validation is written as `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chem;
pub mod engine;
pub mod harness;
pub mod pauli;
pub mod resource;
pub mod spectral;
pub mod statevector;

pub use engine::CMatrix;
pub use pauli::{Pauli, PauliError, PauliString, PauliSum, Phase};
pub use statevector::{ExactPropagator, StateVector};
