//! Dense oracles, fixture loaders and the property suites shared by the
//! property tests and the acceptance report.

#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use qas_core::chem::{
    build_electronic_hamiltonian, build_initial_state, build_observables, parse_fcidump,
    parse_split_integrals, IntegralSet, ObservableSet, Sector, Superposition,
};
use qas_core::engine::{
    build_basis, exact_matrices, matrix_trajectory, represented_state, sample_matrices, solve_dynamics, BasisSpec,
    QasMatrices, ShotModel,
};
use qas_core::pauli::{jordan_wigner, FermionOp};
use qas_core::resource::{
    crossover_threshold, propagator_cost, qas_cost, standard_method_cost, Algorithm, CostFormula, ScenarioParams,
};
use qas_core::statevector::{apply_pauli_rotation, trotter1_evolve};
use qas_core::{ExactPropagator, PauliString, PauliSum, Phase, StateVector};

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// fixtures

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load(stem: &str) -> IntegralSet {
    let text = std::fs::read_to_string(fixture(&format!("{stem}.fcidump"))).unwrap();
    let ints = parse_fcidump(&text).unwrap();
    let split = std::fs::read_to_string(fixture(&format!("{stem}.split"))).unwrap();
    let split = parse_split_integrals(&split, ints.n_orbitals).unwrap();
    ints.with_split(split).unwrap()
}

pub const SECTOR: Sector = Sector { electrons: 2, ms2: 0 };

/// Helium with its equal lowest/highest superposition and `s = (0, 0.5)` basis.
pub struct Helium {
    pub ints: IntegralSet,
    pub h: PauliSum,
    pub obs: ObservableSet,
    pub psi0: StateVector,
    pub basis: Vec<StateVector>,
    pub exact: QasMatrices,
}

pub fn helium() -> Helium {
    let ints = load("he_631g");
    let h = build_electronic_hamiltonian(&ints).unwrap();
    let names = ["1s".to_string(), "2s".to_string()];
    let obs = build_observables(&ints, Some(&names), true).unwrap();
    let psi0 = build_initial_state(
        &h,
        &Superposition { sector: SECTOR, eigen_indices: vec![0, -1], amplitudes: vec![c(FRAC_1_SQRT_2, 0.0); 2] },
    )
    .unwrap();
    let basis = build_basis(&psi0, &h, &BasisSpec::exact(vec![0.0, 0.5])).unwrap();
    let exact = exact_matrices(&basis, &h, &obs, true).unwrap();
    Helium { ints, h, obs, psi0, basis, exact }
}

// ---------------------------------------------------------------------------
// dense oracles

/// `a_p` (or `a†_p`) on an occupation bitstring, with the sign from the
/// occupied modes below `p`. `None` when the result vanishes.
fn ladder(b: usize, p: usize, dagger: bool) -> Option<(usize, f64)> {
    let occupied = b >> p & 1 == 1;
    if occupied == dagger {
        return None;
    }
    let sign = if (b & ((1 << p) - 1)).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    Some((b ^ (1 << p), sign))
}

/// Applies `ops` right to left (the last entry acts first) to `|b>`.
fn apply_word(b: usize, ops: &[(usize, bool)]) -> Option<(usize, f64)> {
    let mut state = b;
    let mut sign = 1.0;
    for &(p, dagger) in ops.iter().rev() {
        let (s, g) = ladder(state, p, dagger)?;
        state = s;
        sign *= g;
    }
    Some((state, sign))
}

/// Second-quantized electronic Hamiltonian built directly in the occupation
/// basis, spin orbital `2p + sigma` on bit `2p + sigma`:
/// `E_nuc + sum h_pq a†_{p s} a_{q s} + 1/2 sum (pq|rs) a†_{p s} a†_{r t} a_{s t} a_{q s}`.
pub fn dense_fermion_hamiltonian(ints: &IntegralSet, one_body: bool, two_body: bool, core: bool) -> CMat {
    let n = ints.n_orbitals;
    let dim = 1usize << (2 * n);
    let mut m = CMat::zeros(dim, dim);
    let so = |p: usize, s: usize| 2 * p + s;
    for b in 0..dim {
        if core {
            m[(b, b)] += c(ints.core_energy, 0.0);
        }
        for p in 0..n {
            for q in 0..n {
                for s in 0..2 {
                    if one_body {
                        let w = ints.one_body[(p, q)];
                        if let Some((b2, g)) = apply_word(b, &[(so(p, s), true), (so(q, s), false)]) {
                            m[(b2, b)] += c(w * g, 0.0);
                        }
                    }
                    if !two_body {
                        continue;
                    }
                    for r in 0..n {
                        for t in 0..n {
                            let w = ints.eri(p, q, r, t);
                            if w == 0.0 {
                                continue;
                            }
                            for u in 0..2 {
                                let word = [(so(p, s), true), (so(r, u), true), (so(t, u), false), (so(q, s), false)];
                                if let Some((b2, g)) = apply_word(b, &word) {
                                    m[(b2, b)] += c(0.5 * w * g, 0.0);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    m
}

/// Dense one-body operator `sum m_pq a†_{p s} a_{q s}`.
pub fn dense_one_body(m: &DMatrix<f64>) -> CMat {
    let n = m.nrows();
    let dim = 1usize << (2 * n);
    let mut out = CMat::zeros(dim, dim);
    for b in 0..dim {
        for p in 0..n {
            for q in 0..n {
                for s in 0..2 {
                    if let Some((b2, g)) = apply_word(b, &[(2 * p + s, true), (2 * q + s, false)]) {
                        out[(b2, b)] += c(m[(p, q)] * g, 0.0);
                    }
                }
            }
        }
    }
    out
}

/// Dense ladder operator matrix.
pub fn dense_ladder(p: usize, dagger: bool, n_modes: usize) -> CMat {
    let dim = 1usize << n_modes;
    let mut m = CMat::zeros(dim, dim);
    for b in 0..dim {
        if let Some((b2, g)) = ladder(b, p, dagger) {
            m[(b2, b)] = c(g, 0.0);
        }
    }
    m
}

fn one_norm(m: &CMat) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `e^M` by scaling and squaring with a truncated Taylor series.
pub fn expm(m: &CMat) -> CMat {
    let norm = one_norm(m);
    let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as u32 } else { 0 };
    let a = m * c(0.5f64.powi(squarings as i32), 0.0);
    let n = m.nrows();
    let mut out = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..=24 {
        term = &term * &a * c(1.0 / k as f64, 0.0);
        out += &term;
    }
    for _ in 0..squarings {
        out = &out * &out;
    }
    out
}

/// `e^{-iHt} v` from the dense Hamiltonian.
pub fn dense_evolve(h: &CMat, t: f64, v: &[Complex64]) -> Vec<Complex64> {
    let u = expm(&(h * c(0.0, -t)));
    let out = u * nalgebra::DVector::from_column_slice(v);
    out.iter().copied().collect()
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn vdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = nalgebra::SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

// ---------------------------------------------------------------------------
// strategies

pub fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    let top = 1u64 << n;
    (0..top, 0..top, 0u32..4)
        .prop_map(move |(x, z, k)| PauliString::from_masks(n, x, z, Phase::from_exponent(k)).unwrap())
}

/// Real weights on phase-free strings, so the sum is Hermitian.
pub fn hermitian_sum(n: usize, max_terms: usize) -> impl Strategy<Value = PauliSum> {
    let top = 1u64 << n;
    prop::collection::vec((0..top, 0..top, -1.0f64..1.0), 1..=max_terms).prop_map(move |terms| {
        PauliSum::from_terms(
            n,
            terms.into_iter().map(|(x, z, w)| (c(w, 0.0), PauliString::from_masks(n, x, z, Phase::ONE).unwrap())),
        )
        .unwrap()
    })
    .prop_filter("nonempty", |s| !s.is_empty())
}

pub fn complex_sum(n: usize, max_terms: usize) -> impl Strategy<Value = PauliSum> {
    let top = 1u64 << n;
    let weight = prop_oneof![(-1.0f64..1.0).prop_map(|r| c(r, 0.0)), (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(r, i)| c(r, i))];
    prop::collection::vec((0..top, 0..top, 0u32..4, weight), 1..=max_terms).prop_map(move |terms| {
        PauliSum::from_terms(
            n,
            terms
                .into_iter()
                .map(|(x, z, k, w)| (w, PauliString::from_masks(n, x, z, Phase::from_exponent(k)).unwrap())),
        )
        .unwrap()
    })
}

pub fn unit_state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-2)
        .prop_map(|v| {
            let amps = v.into_iter().map(|(a, b)| c(a, b)).collect();
            StateVector::from_amplitudes(amps).unwrap().normalized().unwrap()
        })
}

/// `0 = s_0 < s_1 < ...` with gaps of at least 0.05.
pub fn basis_times(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.5, 0..max_len).prop_map(|gaps| {
        let mut t = vec![0.0];
        for g in gaps {
            t.push(t.last().unwrap() + g);
        }
        t
    })
}

// ---------------------------------------------------------------------------
// property suites

pub type Property = fn(&mut TestRunner) -> Result<(), String>;

pub fn runner(cases: u32, deterministic: bool) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    if deterministic {
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
    } else {
        TestRunner::new(config)
    }
}

fn report<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn close(a: Complex64, b: Complex64, tol: f64) -> Result<(), TestCaseError> {
    prop_assert!((a - b).norm() <= tol, "{a} vs {b}");
    Ok(())
}

/// `(ab)b^{-1} = a`, associativity, `a^2 = phase^2 I` and the dense
/// representation is a homomorphism.
pub fn pauli_group_closure(r: &mut TestRunner) -> Result<(), String> {
    let strat = (1usize..=5).prop_flat_map(|n| (pauli_string(n), pauli_string(n), pauli_string(n)));
    report(r.run(&strat, |(a, b, d)| {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(ab.multiply(&b.inverse()).unwrap(), a);
        prop_assert_eq!(ab.multiply(&d).unwrap(), a.multiply(&b.multiply(&d).unwrap()).unwrap());
        let n = a.n_qubits();
        prop_assert_eq!(ab.x_mask() >> n, 0);
        prop_assert_eq!(ab.z_mask() >> n, 0);
        let sq = a.multiply(&a).unwrap();
        prop_assert!(sq.is_identity());
        prop_assert_eq!(sq.phase(), a.phase() * a.phase());
        prop_assert!(max_diff(&ab.to_dense(), &(a.to_dense() * b.to_dense())) < 1e-14);
        Ok(())
    }))
}

/// `{a_p, a†_q} = delta_pq I` and `{a_p, a_q} = 0` as dense matrices for up
/// to four modes, checked against the occupation-basis ladder oracle.
pub fn jw_anticommutation(_: &mut TestRunner) -> Result<(), String> {
    for n in 1..=4 {
        let dim = 1usize << n;
        let id = CMat::identity(dim, dim);
        let zero = CMat::zeros(dim, dim);
        let ann: Vec<CMat> = (0..n).map(|p| jordan_wigner(FermionOp::annihilate(p), n).unwrap().to_dense()).collect();
        let cre: Vec<CMat> = (0..n).map(|p| jordan_wigner(FermionOp::create(p), n).unwrap().to_dense()).collect();
        for p in 0..n {
            if max_diff(&ann[p], &dense_ladder(p, false, n)) > 1e-14 || max_diff(&cre[p], &dense_ladder(p, true, n)) > 1e-14 {
                return Err(format!("mode {p} of {n} differs from the ladder oracle"));
            }
            for q in 0..n {
                let mixed = &ann[p] * &cre[q] + &cre[q] * &ann[p];
                let want = if p == q { &id } else { &zero };
                if max_diff(&mixed, want) > 1e-14 {
                    return Err(format!("{{a_{p}, a+_{q}}} wrong for {n} modes"));
                }
                if max_diff(&(&ann[p] * &ann[q] + &ann[q] * &ann[p]), &zero) > 1e-14 {
                    return Err(format!("{{a_{p}, a_{q}}} nonzero for {n} modes"));
                }
            }
        }
    }
    Ok(())
}

pub fn dense_round_trip(r: &mut TestRunner) -> Result<(), String> {
    let strat = (1usize..=3).prop_flat_map(|n| complex_sum(n, 10));
    report(r.run(&strat, |s| {
        let back = PauliSum::from_dense(&s.to_dense()).unwrap();
        prop_assert_eq!(back.len(), s.len());
        for (p, w) in s.iter() {
            close(back.coefficient(p), *w, 1e-12)?;
        }
        Ok(())
    }))
}

pub fn hermiticity_predicate(r: &mut TestRunner) -> Result<(), String> {
    let strat = (1usize..=3).prop_flat_map(|n| prop_oneof![hermitian_sum(n, 6), complex_sum(n, 6)]);
    report(r.run(&strat, |s| {
        let m = s.to_dense();
        let dense = max_diff(&m, &m.adjoint()) < 1e-10;
        prop_assert_eq!(s.is_hermitian(1e-10), dense);
        Ok(())
    }))
}

/// Norm and energy conservation, `U(t)U(-t) = I`, Trotter norm, and the
/// per-string rotation against `cos(theta) I - i sin(theta) P`.
pub fn propagation_conservation(r: &mut TestRunner) -> Result<(), String> {
    let strat = (1usize..=4).prop_flat_map(|n| (hermitian_sum(n, 8), unit_state(n), -3.0f64..3.0, 1usize..20));
    report(r.run(&strat, |(h, v, t, steps)| {
        let prop = ExactPropagator::new(&h).unwrap();
        let vt = prop.evolve(t, &v).unwrap();
        prop_assert!((vt.norm() - 1.0).abs() < 1e-10);
        let e0 = v.expectation(&h).unwrap().re;
        prop_assert!((vt.expectation(&h).unwrap().re - e0).abs() < 1e-10 * (1.0 + e0.abs()));
        let back = prop.evolve(-t, &vt).unwrap();
        for (a, b) in back.amplitudes().iter().zip(v.amplitudes()) {
            close(*a, *b, 1e-10)?;
        }
        let dense = dense_evolve(&h.to_dense(), t, v.amplitudes());
        for (a, b) in vt.amplitudes().iter().zip(&dense) {
            close(*a, *b, 1e-10)?;
        }
        let tr = trotter1_evolve(&h, t, steps, &v).unwrap();
        prop_assert!((tr.norm() - 1.0).abs() < 1e-10);

        let (p, w) = h.iter().next().map(|(p, w)| (*p, w.re)).unwrap();
        let theta = w * t;
        let mut amps = v.amplitudes().to_vec();
        apply_pauli_rotation(&p, theta, &mut amps);
        let n = p.to_dense().nrows();
        let u = CMat::identity(n, n) * c(theta.cos(), 0.0) - p.to_dense() * c(0.0, theta.sin());
        let want = u * nalgebra::DVector::from_column_slice(v.amplitudes());
        for (a, b) in amps.iter().zip(want.iter()) {
            close(*a, *b, 1e-12)?;
        }
        Ok(())
    }))
}

/// Exact-mode `F` is Hermitian PSD with unit diagonal; `H`, `O`, `H2` are Hermitian.
pub fn exact_matrices_hermitian_psd(r: &mut TestRunner) -> Result<(), String> {
    let strat = (1usize..=4).prop_flat_map(|n| (hermitian_sum(n, 8), unit_state(n), basis_times(4), hermitian_sum(n, 4)));
    report(r.run(&strat, |(h, v, times, o)| {
        let basis = build_basis(&v, &h, &BasisSpec::exact(times)).unwrap();
        let mut obs = ObservableSet::new();
        obs.insert("o", o);
        let m = exact_matrices(&basis, &h, &obs, true).unwrap();
        prop_assert!(m.hermiticity_error() < 1e-10);
        for j in 0..m.dim() {
            close(m.f[(j, j)], c(1.0, 0.0), 1e-12)?;
        }
        let lmin = hermitian_eigenvalues(&m.f)[0];
        prop_assert!(lmin > -1e-10, "F eigenvalue {lmin}");
        Ok(())
    }))
}

/// Random Hermitian `H` on up to four qubits, `psi0` in the span of `k <= 3`
/// eigenvectors, `k` basis states: the represented state tracks the exact
/// evolution and `alpha^dagger F alpha`, `alpha^dagger H alpha` are conserved.
pub fn spanning_basis_exactness(r: &mut TestRunner) -> Result<(), String> {
    let strat = (2usize..=4).prop_flat_map(|n| {
        (
            hermitian_sum(n, 10),
            1usize..=3,
            prop::collection::vec(0usize..1 << n, 3),
            prop::collection::vec((0.3f64..1.0, -3.0f64..3.0), 3),
            basis_times(3),
        )
    });
    report(r.run(&strat, |(h, k, picks, betas, times)| {
        let prop = ExactPropagator::new(&h).unwrap();
        let dim = prop.eigenvalues().len();
        let mut chosen: Vec<usize> = Vec::new();
        for p in picks {
            let e = p % dim;
            if chosen.len() < k && chosen.iter().all(|&q| (prop.eigenvalues()[q] - prop.eigenvalues()[e]).abs() > 0.05) {
                chosen.push(e);
            }
        }
        prop_assume!(chosen.len() == k);
        let mut amps = vec![c(0.0, 0.0); dim];
        for (&e, &(mag, phase)) in chosen.iter().zip(&betas) {
            let beta = Complex64::from_polar(mag, phase);
            for (a, v) in amps.iter_mut().zip(prop.eigenvectors().column(e).iter()) {
                *a += beta * v;
            }
        }
        let psi0 = StateVector::from_amplitudes(amps).unwrap().normalized().unwrap();
        let times: Vec<f64> = times.into_iter().take(k).collect();
        prop_assume!(times.len() == k);
        let basis = build_basis(&psi0, &h, &BasisSpec::exact(times)).unwrap();
        let m = exact_matrices(&basis, &h, &ObservableSet::new(), false).unwrap();
        prop_assume!(hermitian_eigenvalues(&m.f)[0] > 1e-3);

        let (t_final, dt) = (2.0, 2e-3);
        let traj = solve_dynamics(&m, t_final, dt).unwrap();
        let norms = matrix_trajectory(&m.f, &traj).values;
        let energies = matrix_trajectory(&m.h, &traj).values;
        let e0 = energies[0];
        for (step, (&nrm, &e)) in norms.iter().zip(&energies).enumerate() {
            prop_assert!((nrm - 1.0).abs() < 1e-8, "norm {nrm} at step {step}");
            prop_assert!((e - e0).abs() < 1e-8 * e0.abs().max(1.0), "energy {e} vs {e0}");
            let t = traj.times[step];
            let exact = prop.evolve(t, &psi0).unwrap();
            let state = represented_state(&basis, traj.alpha(step)).unwrap();
            let f = vdot(exact.amplitudes(), state.amplitudes()).norm_sqr() / state.norm().powi(2);
            prop_assert!(1.0 - f < 1e-8, "infidelity {} at t = {t}", 1.0 - f);
        }
        Ok(())
    }))
}

/// Global RK4 error on the helium system falls as `dt^4`.
pub fn rk4_order(_: &mut TestRunner) -> Result<(), String> {
    let he = helium();
    let m = &he.exact;
    let f_inv = m.f.clone().try_inverse().ok_or("F not invertible")?;
    let a = f_inv * &m.h * c(0.0, -1.0);
    let t_final = 4.0;
    let exact = expm(&(a * c(t_final, 0.0))).column(0).iter().copied().collect::<Vec<_>>();
    let errors: Vec<f64> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&dt| {
            let traj = solve_dynamics(m, t_final, dt).unwrap();
            let end = traj.alpha(traj.len() - 1);
            end.iter().zip(&exact).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
        })
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        if !(3.7..=4.3).contains(&order) {
            return Err(format!("observed order {order:.3} from errors {errors:?}"));
        }
    }
    Ok(())
}

/// Equal seed and stream give bit-identical samples and trajectories;
/// different streams differ.
pub fn sampling_reproducibility(r: &mut TestRunner) -> Result<(), String> {
    let he = helium();
    let strat = (any::<u64>(), 0u64..1000, 1u64..1_000_000);
    report(r.run(&strat, |(seed, stream, shots)| {
        let model = ShotModel::new(shots, seed, stream).unwrap();
        let a = sample_matrices(&he.exact, &model).unwrap();
        let b = sample_matrices(&he.exact, &model).unwrap();
        prop_assert_eq!(&a.f, &b.f);
        prop_assert_eq!(&a.h, &b.h);
        prop_assert_eq!(&a.o, &b.o);
        prop_assert_eq!(&a.h2, &b.h2);
        let ta = solve_dynamics(&a, 0.2, 1e-3).unwrap();
        let tb = solve_dynamics(&b, 0.2, 1e-3).unwrap();
        prop_assert!(ta.alphas().zip(tb.alphas()).all(|(x, y)| x == y));
        let other = sample_matrices(&he.exact, &ShotModel::new(shots, seed, stream + 1).unwrap()).unwrap();
        prop_assert_ne!(&a.f, &other.f);
        Ok(())
    }))
}

fn algorithms() -> impl Strategy<Value = Algorithm> {
    prop_oneof![
        Just(Algorithm::Trotter1),
        Just(Algorithm::Trotter2),
        (1u32..4).prop_map(Algorithm::Trotter2k),
        Just(Algorithm::Qubitization),
        Just(Algorithm::Lcu),
        Just(Algorithm::Qsp),
        Just(Algorithm::Qdrift),
    ]
}

fn formula() -> impl Strategy<Value = CostFormula> {
    (algorithms(), 1.0f64..500.0, 1e-3f64..100.0, 1e-8f64..1e-2, 1e-2f64..10.0, 1e-2f64..100.0).prop_map(
        |(algorithm, l, t, epsilon, h_max, lambda)| CostFormula { algorithm, l, t, epsilon, h_max, lambda },
    )
}

/// `cost(2t) >= cost(t)`; bound-form ratio exceeds one exactly past the
/// crossover; explicit parameter times never exceed the bound.
pub fn resource_consistency(r: &mut TestRunner) -> Result<(), String> {
    let strat = (formula(), 1usize..6, 1u32..12, 1u64..20_000, prop::collection::vec(0.0f64..1.0, 5));
    report(r.run(&strat, |(f, n, gamma, steps, fractions)| {
        if let Ok(c1) = propagator_cost(&f) {
            let c2 = propagator_cost(&f.with_time(2.0 * f.t)).unwrap();
            prop_assert!(c2 >= c1, "{:?}: {c2} < {c1}", f.algorithm);
        }
        let dt = 1e-3;
        let p = ScenarioParams { n, l: f.l, t_total: steps as f64 * dt, dt, gamma: gamma as f64, epsilon: f.epsilon };
        let (Ok(std), Ok(bound)) = (standard_method_cost(&p, &f), qas_cost(&p, &f, None)) else {
            return Ok(());
        };
        let cross = crossover_threshold(&p);
        if (steps as f64 - cross).abs() > 0.5 {
            prop_assert_eq!(std / bound > 1.0, steps as f64 > cross, "steps {} crossover {}", steps, cross);
        }
        let s: Vec<f64> = fractions.iter().take(n).map(|u| u * p.t_total).collect();
        let explicit = qas_cost(&p, &f, Some(&s)).unwrap();
        prop_assert!(explicit <= bound * (1.0 + 1e-12), "{explicit} > {bound}");
        Ok(())
    }))
}

/// Every suite with its case count.
pub fn suites() -> Vec<(&'static str, Property, u32)> {
    vec![
        ("pauli group closure", pauli_group_closure as Property, 256),
        ("jordan-wigner anticommutation", jw_anticommutation, 1),
        ("pauli sum dense round trip", dense_round_trip, 128),
        ("hermiticity predicate", hermiticity_predicate, 256),
        ("propagation conservation", propagation_conservation, 64),
        ("exact F hermitian psd", exact_matrices_hermitian_psd, 64),
        ("spanning basis exactness and conservation", spanning_basis_exactness, 24),
        ("rk4 order-4 convergence", rk4_order, 1),
        ("sampling bit-reproducibility", sampling_reproducibility, 16),
        ("resource model consistency", resource_consistency, 512),
    ]
}
