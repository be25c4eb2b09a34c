//! Orbital populations and the kinetic / potential / Coulomb energy split.

use std::collections::BTreeMap;

use super::fcidump::IntegralSet;
use super::hamiltonian::{build_electronic_hamiltonian, one_body_operator, orbital_population, two_body_operator};
use super::ChemError;
use crate::pauli::PauliSum;

pub const E_TOTAL: &str = "E_total";
pub const E_KINETIC: &str = "E_kinetic";
pub const E_POTENTIAL: &str = "E_potential";
pub const E_COULOMB: &str = "E_coulomb";

/// Label of the population observable for an orbital name, e.g. `pop_1s`.
pub fn population_label(orbital: &str) -> String {
    format!("pop_{orbital}")
}

/// Named Hermitian observables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObservableSet {
    entries: BTreeMap<String, PauliSum>,
}

impl ObservableSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: impl Into<String>, op: PauliSum) {
        self.entries.insert(label.into(), op);
    }

    pub fn get(&self, label: &str) -> Option<&PauliSum> {
        self.entries.get(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &PauliSum)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keeps only the listed labels, failing on any that are absent.
    pub fn select(&self, labels: &[String]) -> Result<ObservableSet, ChemError> {
        let mut out = ObservableSet::new();
        for l in labels {
            let op = self.get(l).ok_or_else(|| ChemError::UnknownObservable(l.clone()))?;
            out.insert(l.clone(), op.clone());
        }
        Ok(out)
    }
}

/// Population observables for every spatial orbital and, when `energies` is
/// set, the energy decomposition
/// `E_total = E_kinetic + E_potential + E_coulomb + e_nuc`.
///
/// Orbitals are named `1, 2, ...` unless `orbital_names` is given.
pub fn build_observables(
    ints: &IntegralSet,
    orbital_names: Option<&[String]>,
    energies: bool,
) -> Result<ObservableSet, ChemError> {
    let n = ints.n_orbitals;
    let names: Vec<String> = match orbital_names {
        Some(names) if names.len() != n => {
            return Err(ChemError::LengthMismatch { what: "orbital names", got: names.len(), expected: n })
        }
        Some(names) => names.to_vec(),
        None => (1..=n).map(|k| k.to_string()).collect(),
    };
    let mut set = ObservableSet::new();
    for (p, name) in names.iter().enumerate() {
        set.insert(population_label(name), orbital_population(p, n)?);
    }
    if energies {
        let split = ints.split.as_ref().ok_or(ChemError::MissingSplit)?;
        set.insert(E_KINETIC, one_body_operator(&split.kinetic)?);
        set.insert(E_POTENTIAL, one_body_operator(&split.potential)?);
        set.insert(E_COULOMB, two_body_operator(ints)?);
        set.insert(E_TOTAL, build_electronic_hamiltonian(ints)?);
    }
    Ok(set)
}
