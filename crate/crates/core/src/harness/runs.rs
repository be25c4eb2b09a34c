use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentKind, LindepConfig, ResourceConfig};
use super::manifest::{sha256_hex, OutputSink, RunManifest};
use super::stats::{mean, slope, variance, SeriesStats};
use super::{HarnessError, OUT_DIR_ENV};
use crate::chem::{
    build_electronic_hamiltonian, build_initial_state_from, build_observables, parse_fcidump_bytes,
    parse_split_integrals_bytes, IntegralSet, ObservableSet, SectorSpectrum,
};
use crate::engine::{
    build_basis_with, exact_matrices, fidelity, lin_independence_report, matrix_trajectory, min_error_overlap,
    observable_trajectory, represented_state, sample_matrices, solve_dynamics_with, step_count, BasisSpec,
    LinIndependenceReport, Propagation, QasMatrices, ShotModel, SolverOptions,
};
use crate::pauli::PauliSum;
use crate::resource::{
    crossover_threshold, heuristic_threshold, qas_cost, standard_method_cost, CostFormula, ScenarioParams,
};
use crate::spectral::dominant_frequency;
use crate::statevector::{ExactPropagator, StateVector};

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
    /// Raw config bytes for the manifest hash; the canonical serialization is
    /// hashed when absent.
    pub config_bytes: Option<Vec<u8>>,
}

/// Where a run wrote its files.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub manifest: RunManifest,
}

/// Everything derived from the config before any dynamics.
#[derive(Debug, Clone)]
pub struct PreparedSystem {
    pub integrals: IntegralSet,
    pub hamiltonian: PauliSum,
    pub observables: ObservableSet,
    pub psi0: StateVector,
    pub propagator: ExactPropagator,
    /// Sector energies of the selected eigenstates, in config order.
    pub selected_energies: Vec<f64>,
}

impl PreparedSystem {
    /// `|E_a - E_b|` for every selected pair.
    pub fn eigengaps(&self) -> Vec<f64> {
        let e = &self.selected_energies;
        let mut gaps = Vec::new();
        for a in 0..e.len() {
            for b in a + 1..e.len() {
                gaps.push((e[a] - e[b]).abs());
            }
        }
        gaps
    }

    pub fn basis(&self, spec: &BasisSpec) -> Result<Vec<StateVector>, HarnessError> {
        Ok(build_basis_with(&self.psi0, &self.hamiltonian, Some(&self.propagator), spec)?)
    }

    fn labels(&self) -> Vec<String> {
        self.observables.labels().map(str::to_string).collect()
    }
}

pub fn prepare_system(cfg: &ExperimentConfig) -> Result<PreparedSystem, HarnessError> {
    let path = cfg.resolve(&cfg.system.fcidump);
    let bytes = std::fs::read(&path).map_err(|e| HarnessError::io(&path, e))?;
    let mut integrals = parse_fcidump_bytes(&bytes)?;
    if let Some(split) = &cfg.system.split {
        let path = cfg.resolve(split);
        let bytes = std::fs::read(&path).map_err(|e| HarnessError::io(&path, e))?;
        let split = parse_split_integrals_bytes(&bytes, integrals.n_orbitals)?;
        integrals = integrals.with_split(split)?;
    }
    let hamiltonian = build_electronic_hamiltonian(&integrals)?;
    let mut observables =
        build_observables(&integrals, cfg.system.orbital_names.as_deref(), cfg.observables.energies)?;
    if let Some(labels) = &cfg.observables.labels {
        observables = observables.select(labels)?;
    }
    let sup = cfg.initial.superposition()?;
    let spectrum = SectorSpectrum::new(&hamiltonian, sup.sector)?;
    let psi0 = build_initial_state_from(&spectrum, &sup)?;
    let selected_energies = sup.eigen_indices.iter().map(|&i| spectrum.eigenvalue(i)).collect::<Result<_, _>>()?;
    let propagator = ExactPropagator::new(&hamiltonian).map_err(crate::engine::EngineError::from)?;
    Ok(PreparedSystem { integrals, hamiltonian, observables, psi0, propagator, selected_energies })
}

/// Brute-force `e^{-iHt}|psi0>` with the eigenbasis projection done once.
struct Oracle<'a> {
    prop: &'a ExactPropagator,
    coeffs: DVector<Complex64>,
}

impl<'a> Oracle<'a> {
    fn new(prop: &'a ExactPropagator, psi0: &StateVector) -> Self {
        let v = DVector::from_column_slice(psi0.amplitudes());
        Self { prop, coeffs: prop.eigenvectors().ad_mul(&v) }
    }

    fn state(&self, t: f64) -> StateVector {
        let mut c = self.coeffs.clone();
        for (z, &e) in c.iter_mut().zip(self.prop.eigenvalues()) {
            *z *= Complex64::from_polar(1.0, -e * t);
        }
        let v = self.prop.eigenvectors() * c;
        StateVector::from_amplitudes(v.as_slice().to_vec()).expect("eigenvector matrix keeps the register size")
    }
}

fn master_seed(cfg: &ExperimentConfig, opts: &RunOptions) -> Option<u64> {
    opts.seed.or(cfg.shots.as_ref().map(|s| s.seed))
}

fn workers(cfg: &ExperimentConfig, opts: &RunOptions) -> usize {
    opts.workers.unwrap_or(cfg.output.workers)
}

fn output_dir(cfg: &ExperimentConfig, opts: &RunOptions) -> PathBuf {
    if let Some(d) = &opts.out_dir {
        return d.clone();
    }
    if let Some(d) = &cfg.output.dir {
        return cfg.resolve(d);
    }
    let root = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("qas-out"));
    root.join(cfg.name())
}

fn pool(n: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))
}

/// Runs `f(stream)` for `streams` on the pool; results come back in stream order.
fn fan_out<T, F>(threads: usize, streams: std::ops::Range<u64>, f: F) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(u64) -> Result<T, HarnessError> + Sync + Send,
{
    pool(threads)?.install(|| streams.into_par_iter().map(f).collect())
}

fn finish(
    cfg: &ExperimentConfig,
    opts: &RunOptions,
    sink: OutputSink,
    seed: Option<u64>,
    streams: Option<std::ops::Range<u64>>,
    started: Instant,
) -> Result<RunManifest, HarnessError> {
    let config_sha256 = match &opts.config_bytes {
        Some(b) => sha256_hex(b),
        None => sha256_hex(toml::to_string(cfg).map_err(|e| HarnessError::Output(e.to_string()))?.as_bytes()),
    };
    let dir = sink.dir().to_path_buf();
    let manifest = RunManifest {
        kind: cfg.kind.to_string(),
        name: cfg.name(),
        software_version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256,
        master_seed: seed,
        sample_streams: streams,
        workers: workers(cfg, opts),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        outputs: sink.into_checksums(),
    };
    manifest.write(&dir)?;
    Ok(manifest)
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn unit(label: &str) -> &'static str {
    if label.starts_with("pop_") {
        "e"
    } else {
        "Ha"
    }
}

/// Dispatches on `cfg.kind`.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutcome, HarnessError> {
    let manifest = match cfg.kind {
        ExperimentKind::Dynamics => run_dynamics(cfg, opts)?.1,
        ExperimentKind::VarianceScan => run_variance_scan(cfg, opts)?.1,
        ExperimentKind::TrotterScan => run_trotter_scan(cfg, opts)?.1,
        ExperimentKind::ResourceTable => run_resource_table(cfg, opts)?.1,
        ExperimentKind::LindepReport => run_lindep_report(cfg, opts)?.1,
    };
    Ok(RunOutcome { dir: output_dir(cfg, opts), manifest })
}

// ---------------------------------------------------------------------------
// dynamics

#[derive(Debug, Clone, Serialize)]
pub struct DynamicsSummary {
    pub steps: usize,
    pub basis_size: usize,
    pub hamiltonian_terms: usize,
    pub selected_energies: Vec<f64>,
    pub truncated_overlap_eigenvalues: usize,
    pub max_infidelity: f64,
    pub max_abs_error: BTreeMap<String, f64>,
    pub energy_drift_relative: f64,
    pub norm_drift: f64,
    pub max_imag_residual: f64,
    pub min_epsilon_min: f64,
    pub max_epsilon_min: f64,
    /// Cycles per unit time of the oracle and exact-mode series.
    pub frequency_oracle: BTreeMap<String, Option<f64>>,
    pub frequency_qas: BTreeMap<String, Option<f64>>,
    pub shots: Option<u64>,
    pub samples: Option<usize>,
    pub draws_per_sample: Option<usize>,
    pub max_fractional_sd: BTreeMap<String, f64>,
    pub max_fractional_half_range: BTreeMap<String, f64>,
    pub energy_max_fractional_sd: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DynamicsResult {
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    pub oracle: BTreeMap<String, Vec<f64>>,
    pub qas: BTreeMap<String, Vec<f64>>,
    pub sampled: Option<BTreeMap<String, SeriesStats>>,
    pub energy_qas: Vec<f64>,
    pub energy_sampled: Option<SeriesStats>,
    pub epsilon_min: Vec<f64>,
    pub epsilon_min_sampled: Option<SeriesStats>,
    pub norm_qas: Vec<f64>,
    pub infidelity: Vec<f64>,
    pub summary: DynamicsSummary,
}

struct SampleSeries {
    observables: Vec<Vec<f64>>,
    energy: Vec<f64>,
    epsilon: Vec<f64>,
}

fn sample_run(
    exact: &QasMatrices,
    labels: &[String],
    model: ShotModel,
    t_final: f64,
    dt: f64,
) -> Result<SampleSeries, HarnessError> {
    let stream = model.stream;
    let wrap = |source| HarnessError::Sample { stream, source };
    let m = sample_matrices(exact, &model).map_err(wrap)?;
    let traj = solve_dynamics_with(&m, t_final, dt, SolverOptions::default()).map_err(wrap)?;
    let observables = labels
        .iter()
        .map(|l| observable_trajectory(&m, &traj, l).map(|s| s.values))
        .collect::<Result<_, _>>()
        .map_err(wrap)?;
    let energy = matrix_trajectory(&m.h, &traj).values;
    let epsilon = if m.h2.is_some() { min_error_overlap(&m, &traj).map_err(wrap)? } else { vec![] };
    Ok(SampleSeries { observables, energy, epsilon })
}

pub fn run_dynamics(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<(DynamicsResult, RunManifest), HarnessError> {
    let started = Instant::now();
    let sys = prepare_system(cfg)?;
    let spec = cfg.basis.spec()?;
    let basis = sys.basis(&spec)?;
    let labels = sys.labels();
    let (t_final, dt) = (cfg.time.t_final, cfg.time.dt);
    let exact = exact_matrices(&basis, &sys.hamiltonian, &sys.observables, true)?;
    let traj = solve_dynamics_with(&exact, t_final, dt, SolverOptions::default())?;
    let times = traj.times.clone();

    let oracle_evo = Oracle::new(&sys.propagator, &sys.psi0);
    let mut oracle: BTreeMap<String, Vec<f64>> = labels.iter().map(|l| (l.clone(), Vec::new())).collect();
    let mut infidelity = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let psi = oracle_evo.state(t);
        for (label, op) in sys.observables.iter() {
            let v = psi.expectation(op).map_err(crate::engine::EngineError::from)?;
            oracle.get_mut(label).expect("label set").push(v.re);
        }
        let qas_state = represented_state(&basis, traj.alpha(k))?;
        infidelity.push(1.0 - fidelity(&psi, &qas_state)?);
    }

    let mut qas = BTreeMap::new();
    let mut max_imag = 0.0f64;
    for l in &labels {
        let s = observable_trajectory(&exact, &traj, l)?;
        max_imag = max_imag.max(s.max_imag);
        qas.insert(l.clone(), s.values);
    }
    let energy = matrix_trajectory(&exact.h, &traj);
    let norm = matrix_trajectory(&exact.f, &traj);
    max_imag = max_imag.max(energy.max_imag).max(norm.max_imag);
    let epsilon_min = min_error_overlap(&exact, &traj)?;

    let seed = master_seed(cfg, opts);
    let threads = workers(cfg, opts);
    let mut streams = None;
    let (mut sampled, mut energy_sampled, mut eps_sampled) = (None, None, None);
    let mut draws = None;
    if let Some(shot_cfg) = &cfg.shots {
        let seed = seed.unwrap_or(shot_cfg.seed);
        let range = 0..shot_cfg.samples as u64;
        let runs = fan_out(threads, range.clone(), |stream| {
            let model = ShotModel::new(shot_cfg.shots, seed, stream)?;
            sample_run(&exact, &labels, model, t_final, dt)
        })?;
        let mut per_label = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            let st = SeriesStats::from_series(runs.iter().map(|r| r.observables[i].as_slice()))
                .ok_or_else(|| HarnessError::Output("ragged sample series".into()))?;
            per_label.insert(l.clone(), st);
        }
        sampled = Some(per_label);
        energy_sampled = SeriesStats::from_series(runs.iter().map(|r| r.energy.as_slice()));
        eps_sampled = SeriesStats::from_series(runs.iter().map(|r| r.epsilon.as_slice()));
        draws = exact.estimands.as_ref().map(|e| e.table.draw_count());
        streams = Some(range);
    }

    let e0 = energy.values[0];
    let energy_drift_relative =
        energy.values.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max) / e0.abs().max(f64::MIN_POSITIVE);
    let norm_drift = norm.values.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    let summary = DynamicsSummary {
        steps: times.len() - 1,
        basis_size: basis.len(),
        hamiltonian_terms: sys.hamiltonian.len(),
        selected_energies: sys.selected_energies.clone(),
        truncated_overlap_eigenvalues: traj.truncated,
        max_infidelity: infidelity.iter().cloned().fold(0.0, f64::max),
        max_abs_error: labels
            .iter()
            .map(|l| {
                let err = qas[l].iter().zip(&oracle[l]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                (l.clone(), err)
            })
            .collect(),
        energy_drift_relative,
        norm_drift,
        max_imag_residual: max_imag,
        min_epsilon_min: epsilon_min.iter().cloned().fold(f64::INFINITY, f64::min),
        max_epsilon_min: epsilon_min.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        frequency_oracle: labels.iter().map(|l| (l.clone(), dominant_frequency(&oracle[l], dt))).collect(),
        frequency_qas: labels.iter().map(|l| (l.clone(), dominant_frequency(&qas[l], dt))).collect(),
        shots: cfg.shots.as_ref().map(|s| s.shots),
        samples: cfg.shots.as_ref().map(|s| s.samples),
        draws_per_sample: draws,
        max_fractional_sd: sampled
            .iter()
            .flat_map(|m| m.iter().map(|(l, s)| (l.clone(), s.max_fractional_sd())))
            .collect(),
        max_fractional_half_range: sampled
            .iter()
            .flat_map(|m| m.iter().map(|(l, s)| (l.clone(), s.max_fractional_half_range())))
            .collect(),
        energy_max_fractional_sd: energy_sampled.as_ref().map(SeriesStats::max_fractional_sd),
    };

    let result = DynamicsResult {
        times,
        labels,
        oracle,
        qas,
        sampled,
        energy_qas: energy.values,
        energy_sampled,
        epsilon_min,
        epsilon_min_sampled: eps_sampled,
        norm_qas: norm.values,
        infidelity,
        summary,
    };

    let mut sink = OutputSink::create(output_dir(cfg, opts))?;
    let (header, rows) = dynamics_table(&result);
    sink.write_csv("dynamics.csv", &header, &rows)?;
    sink.write_json("summary.json", &result.summary)?;
    let manifest = finish(cfg, opts, sink, seed, streams, started)?;
    Ok((result, manifest))
}

fn dynamics_table(r: &DynamicsResult) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["t[1/Ha]".to_string()];
    for l in &r.labels {
        let u = unit(l);
        header.push(format!("{l}_oracle[{u}]"));
        header.push(format!("{l}_qas[{u}]"));
        if r.sampled.is_some() {
            for col in ["mean", "sd", "min", "max"] {
                header.push(format!("{l}_{col}[{u}]"));
            }
        }
    }
    header.push("energy_qas[Ha]".into());
    if r.energy_sampled.is_some() {
        header.push("energy_mean[Ha]".into());
        header.push("energy_sd[Ha]".into());
    }
    header.push("epsilon_min_qas[Ha^2]".into());
    if r.epsilon_min_sampled.is_some() {
        header.push("epsilon_min_mean[Ha^2]".into());
    }
    header.push("norm_qas[1]".into());
    header.push("infidelity_qas[1]".into());

    let rows = (0..r.times.len())
        .map(|k| {
            let mut row = vec![format!("{}", r.times[k])];
            for l in &r.labels {
                row.push(num(r.oracle[l][k]));
                row.push(num(r.qas[l][k]));
                if let Some(s) = r.sampled.as_ref().map(|m| &m[l]) {
                    row.extend([num(s.mean[k]), num(s.sd[k]), num(s.min[k]), num(s.max[k])]);
                }
            }
            row.push(num(r.energy_qas[k]));
            if let Some(s) = &r.energy_sampled {
                row.push(num(s.mean[k]));
                row.push(num(s.sd[k]));
            }
            row.push(num(r.epsilon_min[k]));
            if let Some(s) = &r.epsilon_min_sampled {
                row.push(num(s.mean[k]));
            }
            row.push(num(r.norm_qas[k]));
            row.push(num(r.infidelity[k]));
            row
        })
        .collect();
    (header, rows)
}

// ---------------------------------------------------------------------------
// variance scan

#[derive(Debug, Clone, Serialize)]
pub struct VarianceResult {
    pub shots: Vec<u64>,
    pub samples: usize,
    /// Observable labels plus `energy`.
    pub labels: Vec<String>,
    /// Across-seed variance averaged over the time grid, per shot count.
    pub mean_variance: BTreeMap<String, Vec<f64>>,
    /// Across-seed variance at the final time.
    pub final_variance: BTreeMap<String, Vec<f64>>,
    /// `d log(var) / d log(N_s)` from the time-averaged variances.
    pub slopes: BTreeMap<String, Option<f64>>,
}

pub fn run_variance_scan(
    cfg: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(VarianceResult, RunManifest), HarnessError> {
    let started = Instant::now();
    let scan = cfg.variance_scan.as_ref().ok_or_else(|| HarnessError::Config("[variance_scan] is required".into()))?;
    if scan.shots.len() < 2 {
        return Err(HarnessError::Config("variance_scan.shots needs at least two shot counts".into()));
    }
    let shot_cfg = cfg.shots.as_ref().ok_or_else(|| HarnessError::Config("[shots] is required".into()))?;
    let seed = master_seed(cfg, opts).unwrap_or(shot_cfg.seed);
    let sys = prepare_system(cfg)?;
    let basis = sys.basis(&cfg.basis.spec()?)?;
    let exact = exact_matrices(&basis, &sys.hamiltonian, &sys.observables, false)?;
    let obs_labels = sys.labels();
    let mut labels = obs_labels.clone();
    labels.push("energy".into());
    let samples = shot_cfg.samples as u64;
    let (t_final, dt) = (cfg.time.t_final, cfg.time.dt);

    let mut mean_variance: BTreeMap<String, Vec<f64>> = labels.iter().map(|l| (l.clone(), vec![])).collect();
    let mut final_variance = mean_variance.clone();
    for (i, &shots) in scan.shots.iter().enumerate() {
        let base = i as u64 * samples;
        let runs = fan_out(workers(cfg, opts), base..base + samples, |stream| {
            sample_run(&exact, &obs_labels, ShotModel::new(shots, seed, stream)?, t_final, dt)
        })?;
        for (j, l) in labels.iter().enumerate() {
            let series: Vec<&[f64]> = runs
                .iter()
                .map(|r| if j < obs_labels.len() { r.observables[j].as_slice() } else { r.energy.as_slice() })
                .collect();
            let len = series[0].len();
            let per_t: Vec<f64> =
                (0..len).map(|k| variance(&series.iter().map(|s| s[k]).collect::<Vec<_>>())).collect();
            mean_variance.get_mut(l).expect("label").push(mean(&per_t));
            final_variance.get_mut(l).expect("label").push(per_t[len - 1]);
        }
    }
    let log_shots: Vec<f64> = scan.shots.iter().map(|&s| (s as f64).ln()).collect();
    let slopes = mean_variance
        .iter()
        .map(|(l, v)| {
            let logs: Vec<f64> = v.iter().map(|x| x.ln()).collect();
            (l.clone(), slope(&log_shots, &logs).filter(|s| s.is_finite()))
        })
        .collect();
    let result = VarianceResult {
        shots: scan.shots.clone(),
        samples: shot_cfg.samples,
        labels,
        mean_variance,
        final_variance,
        slopes,
    };

    let mut sink = OutputSink::create(output_dir(cfg, opts))?;
    let header: Vec<String> =
        ["shots", "observable", "mean_variance", "final_variance"].iter().map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for (i, &shots) in result.shots.iter().enumerate() {
        for l in &result.labels {
            rows.push(vec![
                shots.to_string(),
                l.clone(),
                num(result.mean_variance[l][i]),
                num(result.final_variance[l][i]),
            ]);
        }
    }
    sink.write_csv("variance_scan.csv", &header, &rows)?;
    sink.write_json("variance_slopes.json", &result.slopes)?;
    let streams = 0..samples * scan.shots.len() as u64;
    let manifest = finish(cfg, opts, sink, Some(seed), Some(streams), started)?;
    Ok((result, manifest))
}

// ---------------------------------------------------------------------------
// Trotter scan

#[derive(Debug, Clone, Serialize)]
pub struct TrotterRow {
    pub steps: usize,
    /// `None` is the noiseless limit.
    pub shots: Option<u64>,
    pub infidelity_mean: f64,
    pub infidelity_sd: f64,
    pub samples: usize,
    /// Worst `1 - |<psi_j^exact|psi_j^trotter>|^2` over the basis.
    pub basis_infidelity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrotterResult {
    pub t_final: f64,
    pub rows: Vec<TrotterRow>,
}

impl TrotterResult {
    /// Mean infidelities for one shot setting, in step order.
    pub fn curve(&self, shots: Option<u64>) -> Vec<(usize, f64)> {
        self.rows.iter().filter(|r| r.shots == shots).map(|r| (r.steps, r.infidelity_mean)).collect()
    }
}

fn final_infidelity(
    m: &QasMatrices,
    basis: &[StateVector],
    target: &StateVector,
    t_final: f64,
    dt: f64,
) -> Result<f64, crate::engine::EngineError> {
    let traj = solve_dynamics_with(m, t_final, dt, SolverOptions::default())?;
    let state = represented_state(basis, traj.alpha(traj.len() - 1))?;
    Ok(1.0 - fidelity(target, &state)?)
}

pub fn run_trotter_scan(
    cfg: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(TrotterResult, RunManifest), HarnessError> {
    let started = Instant::now();
    let scan = cfg.trotter_scan.as_ref().ok_or_else(|| HarnessError::Config("[trotter_scan] is required".into()))?;
    let sys = prepare_system(cfg)?;
    let (t_final, dt) = (cfg.time.t_final, cfg.time.dt);
    let steps_total = step_count(t_final, dt)?;
    let t_end = steps_total as f64 * dt;
    let target = Oracle::new(&sys.propagator, &sys.psi0).state(t_end);
    let exact_basis = sys.basis(&BasisSpec::exact(cfg.basis.times.clone()))?;
    let seed = master_seed(cfg, opts);
    let samples = cfg.shots.as_ref().map_or(0, |s| s.samples as u64);
    let empty = ObservableSet::new();

    let mut rows = Vec::new();
    for &steps in &scan.steps {
        let spec = BasisSpec { times: cfg.basis.times.clone(), propagation: Propagation::Trotter1 { steps } };
        let basis = sys.basis(&spec)?;
        let basis_infidelity = basis
            .iter()
            .zip(&exact_basis)
            .map(|(a, b)| fidelity(a, b).map(|f| 1.0 - f))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let m = exact_matrices(&basis, &sys.hamiltonian, &empty, false)?;
        if scan.noiseless {
            let inf = final_infidelity(&m, &basis, &target, t_final, dt)?;
            rows.push(TrotterRow {
                steps,
                shots: None,
                infidelity_mean: inf,
                infidelity_sd: 0.0,
                samples: 1,
                basis_infidelity,
            });
        }
        // Same streams for every step count, so curves differ only through the basis.
        for (i, &shots) in scan.shots.iter().enumerate() {
            let seed = seed.unwrap_or(0);
            let base = i as u64 * samples;
            let infs = fan_out(workers(cfg, opts), base..base + samples, |stream| {
                let model = ShotModel::new(shots, seed, stream)?;
                let wrap = |source| HarnessError::Sample { stream, source };
                let noisy = sample_matrices(&m, &model).map_err(wrap)?;
                final_infidelity(&noisy, &basis, &target, t_final, dt).map_err(wrap)
            })?;
            rows.push(TrotterRow {
                steps,
                shots: Some(shots),
                infidelity_mean: mean(&infs),
                infidelity_sd: variance(&infs).sqrt(),
                samples: infs.len(),
                basis_infidelity,
            });
        }
    }
    let result = TrotterResult { t_final: t_end, rows };

    let mut sink = OutputSink::create(output_dir(cfg, opts))?;
    let header: Vec<String> = ["trotter_steps", "shots", "infidelity_mean", "infidelity_sd", "samples", "basis_infidelity"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = result
        .rows
        .iter()
        .map(|r| {
            vec![
                r.steps.to_string(),
                r.shots.map_or("inf".to_string(), |s| s.to_string()),
                num(r.infidelity_mean),
                num(r.infidelity_sd),
                r.samples.to_string(),
                num(r.basis_infidelity),
            ]
        })
        .collect();
    sink.write_csv("trotter_scan.csv", &header, &rows)?;
    let streams = (samples > 0).then(|| 0..samples * scan.shots.len() as u64);
    let manifest = finish(cfg, opts, sink, seed, streams, started)?;
    Ok((result, manifest))
}

// ---------------------------------------------------------------------------
// resource table

#[derive(Debug, Clone, Serialize)]
pub struct ResourceRow {
    pub algorithm: String,
    pub steps: u64,
    pub standard: f64,
    pub qas_bound: f64,
    pub qas_explicit: f64,
    pub ratio_bound: f64,
    pub ratio_explicit: f64,
    pub qas_regime: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResourceResult {
    pub gamma: f64,
    pub epsilon: f64,
    pub n: usize,
    pub pauli_terms: usize,
    pub lambda: f64,
    pub h_max: f64,
    pub dt: f64,
    pub crossover_steps: f64,
    pub heuristic_steps: u64,
    pub configured_steps: u64,
    pub configured_in_qas_regime: bool,
    pub rows: Vec<ResourceRow>,
    /// Algorithms whose bound is undefined for these parameters, with the reason.
    pub unavailable: BTreeMap<String, String>,
}

pub fn run_resource_table(
    cfg: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(ResourceResult, RunManifest), HarnessError> {
    let started = Instant::now();
    let rc = cfg.resource.clone().unwrap_or_default();
    let ResourceConfig { gamma, epsilon, .. } = rc;
    let path = cfg.resolve(&cfg.system.fcidump);
    let bytes = std::fs::read(&path).map_err(|e| HarnessError::io(&path, e))?;
    let h = build_electronic_hamiltonian(&parse_fcidump_bytes(&bytes)?)?;
    let n = cfg.basis.times.len();
    let dt = cfg.time.dt;
    let configured_steps = step_count(cfg.time.t_final, dt)? as u64;
    let base = ScenarioParams { n, l: h.len() as f64, t_total: cfg.time.t_final, dt, gamma, epsilon };
    base.validate()?;
    let crossover = crossover_threshold(&base);
    let heuristic = heuristic_threshold(n);

    let mut grid = if rc.steps_grid.is_empty() {
        vec![1, 10, 100, crossover.round() as u64, heuristic, 1000, 10_000]
    } else {
        rc.steps_grid.clone()
    };
    grid.push(configured_steps);
    grid.sort_unstable();
    grid.dedup();

    let lambda = h.one_norm();
    let h_max = h.max_abs_element();
    let mut rows = Vec::new();
    let mut unavailable = BTreeMap::new();
    'alg: for alg in &rc.algorithms {
        let f = CostFormula { algorithm: *alg, l: h.len() as f64, t: dt, epsilon, h_max, lambda };
        let mut alg_rows = Vec::new();
        for &steps in &grid {
            let p = ScenarioParams { t_total: steps as f64 * dt, ..base };
            let costs = standard_method_cost(&p, &f).and_then(|s| {
                Ok((s, qas_cost(&p, &f, None)?, qas_cost(&p, &f, Some(&cfg.basis.times))?))
            });
            let (standard, qas_bound, qas_explicit) = match costs {
                Ok(c) => c,
                Err(e) => {
                    unavailable.insert(alg.to_string(), e.to_string());
                    continue 'alg;
                }
            };
            alg_rows.push(ResourceRow {
                algorithm: alg.to_string(),
                steps,
                standard,
                qas_bound,
                qas_explicit,
                ratio_bound: standard / qas_bound,
                ratio_explicit: standard / qas_explicit,
                qas_regime: standard > qas_bound,
            });
        }
        rows.extend(alg_rows);
    }
    let result = ResourceResult {
        gamma,
        epsilon,
        n,
        pauli_terms: h.len(),
        lambda,
        h_max,
        dt,
        crossover_steps: crossover,
        heuristic_steps: heuristic,
        configured_steps,
        configured_in_qas_regime: configured_steps as f64 > crossover,
        rows,
        unavailable,
    };

    let mut sink = OutputSink::create(output_dir(cfg, opts))?;
    let header: Vec<String> =
        ["algorithm", "steps", "standard", "qas_bound", "qas_explicit", "ratio_bound", "ratio_explicit", "regime"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    let rows: Vec<Vec<String>> = result
        .rows
        .iter()
        .map(|r| {
            vec![
                r.algorithm.clone(),
                r.steps.to_string(),
                num(r.standard),
                num(r.qas_bound),
                num(r.qas_explicit),
                num(r.ratio_bound),
                num(r.ratio_explicit),
                if r.qas_regime { "QAS regime" } else { "standard regime" }.to_string(),
            ]
        })
        .collect();
    sink.write_csv("resource_table.csv", &header, &rows)?;
    sink.write_json("resource.json", &result)?;
    let manifest = finish(cfg, opts, sink, None, None, started)?;
    Ok((result, manifest))
}

// ---------------------------------------------------------------------------
// linear-independence report

#[derive(Debug, Clone, Serialize)]
pub struct LindepCase {
    pub parameter_times: Vec<f64>,
    /// Why this case was included.
    pub origin: String,
    pub report: LinIndependenceReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct LindepResult {
    pub eigengaps: Vec<f64>,
    pub cases: Vec<LindepCase>,
}

pub fn run_lindep_report(
    cfg: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(LindepResult, RunManifest), HarnessError> {
    let started = Instant::now();
    let lc = cfg.lindep.clone().unwrap_or(LindepConfig { s1_values: vec![], rel_cutoff: 1e-8 });
    let sys = prepare_system(cfg)?;
    let gaps = sys.eigengaps();
    let horizon = cfg.time.t_final;

    let mut candidates: Vec<(Vec<f64>, String)> = vec![(cfg.basis.times.clone(), "configured basis".into())];
    for &s in &lc.s1_values {
        candidates.push((vec![0.0, s], "requested s1".into()));
    }
    for &g in &gaps {
        if g > 0.0 {
            candidates.push((vec![0.0, 2.0 * std::f64::consts::PI / g], format!("2 pi / gap {g}")));
        }
    }
    let empty = ObservableSet::new();
    let mut cases = Vec::new();
    for (times, origin) in candidates {
        let basis = sys.basis(&BasisSpec::exact(times.clone()))?;
        let m = exact_matrices(&basis, &sys.hamiltonian, &empty, false)?;
        let report = lin_independence_report(&m.f, Some(&gaps), &times, horizon, lc.rel_cutoff);
        cases.push(LindepCase { parameter_times: times, origin, report });
    }
    let result = LindepResult { eigengaps: gaps, cases };

    let mut sink = OutputSink::create(output_dir(cfg, opts))?;
    sink.write_json("lindep.json", &result)?;
    let manifest = finish(cfg, opts, sink, None, None, started)?;
    Ok((result, manifest))
}
