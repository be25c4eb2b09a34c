use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex64;

use super::{CMatrix, EngineError};
use crate::chem::ObservableSet;
use crate::pauli::{PauliString, PauliSum};
use crate::statevector::StateVector;

/// Per-Pauli-string matrices `P_jk = <psi_j|P|psi_k>` together with the overlap
/// `F_jk`. Every matrix element of a Pauli sum is a linear combination of
/// these; the identity string maps to `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimandTable {
    pub overlap: CMatrix,
    pub strings: BTreeMap<PauliString, CMatrix>,
}

impl EstimandTable {
    /// Exact estimands for `strings` (the identity, if present, is skipped).
    pub fn exact<'a>(
        basis: &[StateVector],
        strings: impl IntoIterator<Item = &'a PauliString>,
    ) -> Result<Self, EngineError> {
        let overlap = gram(basis, basis)?;
        let mut table = BTreeMap::new();
        for p in strings {
            if p.is_identity() || table.contains_key(p) {
                continue;
            }
            let images = basis.iter().map(|v| v.apply_pauli_string(p)).collect::<Result<Vec<_>, _>>()?;
            table.insert(*p, gram(basis, &images)?);
        }
        Ok(Self { overlap, strings: table })
    }

    pub fn dim(&self) -> usize {
        self.overlap.nrows()
    }

    /// `sum_P w_P P_jk`, with the identity weight applied to the overlap.
    pub fn assemble(&self, op: &PauliSum) -> Result<CMatrix, EngineError> {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (p, &w) in op.iter() {
            let block = if p.is_identity() {
                &self.overlap
            } else {
                self.strings
                    .get(p)
                    .ok_or_else(|| EngineError::DimensionMismatch(format!("no estimand for Pauli string {p}")))?
            };
            m.zip_apply(block, |a, b| *a += w * b);
        }
        Ok(m)
    }

    /// Real-valued draws one sample needs: two per off-diagonal overlap
    /// element, two per off-diagonal string element and one per diagonal
    /// string element.
    pub fn draw_count(&self) -> usize {
        let n = self.dim();
        let off = n * (n - 1) / 2;
        2 * off + self.strings.len() * (2 * off + n)
    }
}

/// Operator definitions needed to rebuild matrices from a (possibly sampled)
/// estimand table.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimandModel {
    pub table: EstimandTable,
    pub hamiltonian: PauliSum,
    pub observables: ObservableSet,
    pub h_squared: Option<PauliSum>,
}

impl EstimandModel {
    pub fn matrices(&self, table: &EstimandTable) -> Result<QasMatrices, EngineError> {
        let mut o = BTreeMap::new();
        for (label, op) in self.observables.iter() {
            o.insert(label.to_string(), table.assemble(op)?);
        }
        let h2 = self.h_squared.as_ref().map(|op| table.assemble(op)).transpose()?;
        Ok(QasMatrices { f: table.overlap.clone(), h: table.assemble(&self.hamiltonian)?, o, h2, estimands: None })
    }
}

/// Overlap, Hamiltonian, observable and optional squared-Hamiltonian matrices
/// in the time-evolved basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QasMatrices {
    pub f: CMatrix,
    pub h: CMatrix,
    pub o: BTreeMap<String, CMatrix>,
    pub h2: Option<CMatrix>,
    /// Present on exact matrices so they can be resampled per Pauli term.
    pub estimands: Option<Arc<EstimandModel>>,
}

impl QasMatrices {
    pub fn dim(&self) -> usize {
        self.f.nrows()
    }

    /// Builds matrices directly from raw blocks (no Pauli-level estimands).
    pub fn from_blocks(f: CMatrix, h: CMatrix, o: BTreeMap<String, CMatrix>, h2: Option<CMatrix>) -> Result<Self, EngineError> {
        let n = f.nrows();
        let square = |m: &CMatrix| m.nrows() == n && m.ncols() == n;
        if !square(&f) || !square(&h) || !o.values().all(square) || !h2.as_ref().is_none_or(square) {
            return Err(EngineError::DimensionMismatch(format!("all matrices must be {n}x{n}")));
        }
        Ok(Self { f, h, o, h2, estimands: None })
    }

    pub fn observable(&self, label: &str) -> Result<&CMatrix, EngineError> {
        self.o.get(label).ok_or_else(|| EngineError::UnknownObservable(label.to_string()))
    }

    /// Largest `|M_jk - conj(M_kj)|` over all held matrices.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = hermiticity_error(&self.f).max(hermiticity_error(&self.h));
        for m in self.o.values().chain(self.h2.iter()) {
            worst = worst.max(hermiticity_error(m));
        }
        worst
    }
}

pub(crate) fn hermiticity_error(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `G_jk = <a_j|b_k>`.
fn gram(a: &[StateVector], b: &[StateVector]) -> Result<CMatrix, EngineError> {
    let mut m = CMatrix::zeros(a.len(), b.len());
    for (j, u) in a.iter().enumerate() {
        for (k, v) in b.iter().enumerate() {
            m[(j, k)] = u.inner(v)?;
        }
    }
    Ok(m)
}

/// Exact `F`, `H`, every observable in `observables` and, if `with_h2`,
/// `(H^2)_jk = <H psi_j|H psi_k>`.
pub fn exact_matrices(
    basis: &[StateVector],
    h: &PauliSum,
    observables: &ObservableSet,
    with_h2: bool,
) -> Result<QasMatrices, EngineError> {
    let Some(first) = basis.first() else {
        return Err(EngineError::InvalidBasis("empty basis".into()));
    };
    let n_qubits = first.n_qubits();
    if basis.iter().any(|v| v.n_qubits() != n_qubits) || h.n_qubits() != n_qubits {
        return Err(EngineError::DimensionMismatch("basis states and Hamiltonian disagree on qubit count".into()));
    }
    for (label, op) in observables.iter() {
        if op.n_qubits() != n_qubits {
            return Err(EngineError::DimensionMismatch(format!("observable {label} acts on {} qubits", op.n_qubits())));
        }
    }
    let h_squared = if with_h2 { Some(h.product(h)?) } else { None };

    let mut strings: BTreeSet<&PauliString> = h.strings().collect();
    for (_, op) in observables.iter() {
        strings.extend(op.strings());
    }
    if let Some(h2) = &h_squared {
        strings.extend(h2.strings());
    }
    let table = EstimandTable::exact(basis, strings)?;
    let model = EstimandModel { table, hamiltonian: h.clone(), observables: observables.clone(), h_squared };
    let mut out = model.matrices(&model.table)?;

    if with_h2 {
        // Direct contraction is cheaper and more accurate than the string expansion.
        let images = basis.iter().map(|v| v.apply_pauli_sum(h)).collect::<Result<Vec<_>, _>>()?;
        out.h2 = Some(gram(&images, &images)?);
    }
    out.estimands = Some(Arc::new(model));
    Ok(out)
}

/// `sum_jk conj(a_j) M_jk b_k`.
pub fn quadratic_form(a: &[Complex64], m: &CMatrix, b: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, aj) in a.iter().enumerate() {
        let mut row = Complex64::new(0.0, 0.0);
        for (k, bk) in b.iter().enumerate() {
            row += m[(j, k)] * bk;
        }
        acc += aj.conj() * row;
    }
    acc
}
