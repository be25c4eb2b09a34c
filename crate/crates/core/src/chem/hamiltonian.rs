//! Second-quantised electronic Hamiltonian and its Jordan-Wigner image.
//!
//! Spin-orbitals are interleaved: spatial orbital `p` with spin up is qubit
//! `2p`, spin down is qubit `2p + 1`.
//!
//! `H = e_nuc + sum_{pq,s} h_pq a†_{ps} a_{qs}
//!          + 1/2 sum_{pqrs,s,t} (ps|qr) a†_{ps} a†_{qt} a_{rt} a_{ss}`

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fcidump::IntegralSet;
use super::ChemError;
use crate::pauli::{jordan_wigner, FermionOp, PauliError, PauliString, PauliSum, DEFAULT_DROP_TOLERANCE};

/// Qubit index of spatial orbital `orbital` with spin `down`.
pub fn spin_orbital(orbital: usize, down: bool) -> usize {
    2 * orbital + down as usize
}

/// Cached Jordan-Wigner images of ladder operators and their pair products.
pub(crate) struct LadderCache {
    create: Vec<PauliSum>,
    annihilate: Vec<PauliSum>,
    hop: BTreeMap<(usize, usize), PauliSum>,
}

impl LadderCache {
    pub(crate) fn new(n_modes: usize) -> Result<Self, PauliError> {
        let create = (0..n_modes).map(|p| jordan_wigner(FermionOp::create(p), n_modes)).collect::<Result<_, _>>()?;
        let annihilate =
            (0..n_modes).map(|p| jordan_wigner(FermionOp::annihilate(p), n_modes)).collect::<Result<_, _>>()?;
        Ok(Self { create, annihilate, hop: BTreeMap::new() })
    }

    /// `a†_p a_q`
    pub(crate) fn hop(&mut self, p: usize, q: usize) -> Result<&PauliSum, PauliError> {
        if !self.hop.contains_key(&(p, q)) {
            let s = self.create[p].product(&self.annihilate[q])?;
            self.hop.insert((p, q), s);
        }
        Ok(&self.hop[&(p, q)])
    }
}

/// Sums weighted Pauli sums without intermediate dropping.
pub(crate) struct Accumulator {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl Accumulator {
    pub(crate) fn new(n_qubits: usize) -> Self {
        Self { n_qubits, terms: BTreeMap::new() }
    }

    pub(crate) fn add(&mut self, weight: f64, s: &PauliSum) {
        for (p, c) in s.iter() {
            *self.terms.entry(*p).or_default() += c * weight;
        }
    }

    pub(crate) fn add_constant(&mut self, value: f64) -> Result<(), PauliError> {
        let id = PauliString::identity(self.n_qubits)?;
        *self.terms.entry(id).or_default() += Complex64::new(value, 0.0);
        Ok(())
    }

    pub(crate) fn finish(self) -> PauliSum {
        PauliSum::from_merged(self.n_qubits, self.terms, DEFAULT_DROP_TOLERANCE)
    }
}

/// `sum_{pq,s} m_pq a†_{ps} a_{qs}` for a spatial-orbital matrix `m`.
pub fn one_body_operator(m: &DMatrix<f64>) -> Result<PauliSum, ChemError> {
    let n_orb = m.nrows();
    let mut cache = LadderCache::new(2 * n_orb)?;
    let mut acc = Accumulator::new(2 * n_orb);
    add_one_body(&mut acc, &mut cache, m)?;
    Ok(acc.finish())
}

fn add_one_body(acc: &mut Accumulator, cache: &mut LadderCache, m: &DMatrix<f64>) -> Result<(), PauliError> {
    let n_orb = m.nrows();
    for p in 0..n_orb {
        for q in 0..n_orb {
            let w = m[(p, q)];
            if w == 0.0 {
                continue;
            }
            for down in [false, true] {
                acc.add(w, cache.hop(spin_orbital(p, down), spin_orbital(q, down))?);
            }
        }
    }
    Ok(())
}

fn add_two_body(acc: &mut Accumulator, cache: &mut LadderCache, ints: &IntegralSet) -> Result<(), PauliError> {
    let n = ints.n_orbitals;
    // a†_i a†_j a_k a_l is formed as (a†_i a†_j)(a_k a_l) from cached pair images.
    let mut create_pair: BTreeMap<(usize, usize), PauliSum> = BTreeMap::new();
    let mut annih_pair: BTreeMap<(usize, usize), PauliSum> = BTreeMap::new();
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = ints.eri(p, s, q, r);
                    if v == 0.0 {
                        continue;
                    }
                    for sig in [false, true] {
                        for tau in [false, true] {
                            let i = spin_orbital(p, sig);
                            let j = spin_orbital(q, tau);
                            let k = spin_orbital(r, tau);
                            let l = spin_orbital(s, sig);
                            if i == j || k == l {
                                continue;
                            }
                            if let std::collections::btree_map::Entry::Vacant(e) = create_pair.entry((i, j)) {
                                let prod = cache.create[i].product(&cache.create[j])?;
                                e.insert(prod);
                            }
                            if let std::collections::btree_map::Entry::Vacant(e) = annih_pair.entry((k, l)) {
                                let prod = cache.annihilate[k].product(&cache.annihilate[l])?;
                                e.insert(prod);
                            }
                            let term = create_pair[&(i, j)].product(&annih_pair[&(k, l)])?;
                            acc.add(0.5 * v, &term);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// The two-electron (electron-electron repulsion) part alone.
pub fn two_body_operator(ints: &IntegralSet) -> Result<PauliSum, ChemError> {
    let n_modes = 2 * ints.n_orbitals;
    let mut cache = LadderCache::new(n_modes)?;
    let mut acc = Accumulator::new(n_modes);
    add_two_body(&mut acc, &mut cache, ints)?;
    Ok(acc.finish())
}

/// Jordan-Wigner image of the full electronic Hamiltonian, nuclear repulsion
/// included as the identity weight.
pub fn build_electronic_hamiltonian(ints: &IntegralSet) -> Result<PauliSum, ChemError> {
    ints.check_symmetry()?;
    let n_modes = 2 * ints.n_orbitals;
    let mut cache = LadderCache::new(n_modes)?;
    let mut acc = Accumulator::new(n_modes);
    add_one_body(&mut acc, &mut cache, &ints.one_body)?;
    add_two_body(&mut acc, &mut cache, ints)?;
    acc.add_constant(ints.core_energy)?;
    Ok(acc.finish())
}

/// Total electron number `sum_p a†_p a_p` on `n_orbitals` spatial orbitals.
pub fn particle_number(n_orbitals: usize) -> Result<PauliSum, ChemError> {
    one_body_operator(&DMatrix::identity(n_orbitals, n_orbitals))
}

/// Population of spatial orbital `orbital`: `n_up + n_down`.
pub fn orbital_population(orbital: usize, n_orbitals: usize) -> Result<PauliSum, ChemError> {
    let mut m = DMatrix::zeros(n_orbitals, n_orbitals);
    m[(orbital, orbital)] = 1.0;
    one_body_operator(&m)
}
