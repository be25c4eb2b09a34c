//! TOML experiment configuration.
//!
//! Relative paths resolve against the directory holding the config file.
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::chem::{Sector, Superposition};
use crate::engine::{BasisSpec, Propagation};
use crate::resource::Algorithm;

/// Largest accepted `T / dt`.
pub const MAX_STEPS: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Dynamics,
    VarianceScan,
    TrotterScan,
    ResourceTable,
    LindepReport,
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExperimentKind::Dynamics => "dynamics",
            ExperimentKind::VarianceScan => "variance_scan",
            ExperimentKind::TrotterScan => "trotter_scan",
            ExperimentKind::ResourceTable => "resource_table",
            ExperimentKind::LindepReport => "lindep_report",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub fcidump: PathBuf,
    /// Kinetic / potential sidecar; required for energy observables.
    #[serde(default)]
    pub split: Option<PathBuf>,
    /// One name per spatial orbital, used in `pop_<name>` labels.
    #[serde(default)]
    pub orbital_names: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub electrons: usize,
    #[serde(default)]
    pub ms2: i64,
    /// Sector eigen-indices; negative values count down from the top.
    pub eigen_indices: Vec<i64>,
    /// Real parts; equal weights when omitted.
    #[serde(default)]
    pub amplitudes: Option<Vec<f64>>,
    #[serde(default)]
    pub amplitudes_imag: Option<Vec<f64>>,
}

impl InitialConfig {
    pub fn superposition(&self) -> Result<Superposition, HarnessError> {
        let k = self.eigen_indices.len();
        if k == 0 {
            return Err(HarnessError::Config("initial.eigen_indices is empty".into()));
        }
        let re = match &self.amplitudes {
            Some(a) => a.clone(),
            None => vec![1.0 / (k as f64).sqrt(); k],
        };
        let im = self.amplitudes_imag.clone().unwrap_or_else(|| vec![0.0; re.len()]);
        if re.len() != k || im.len() != k {
            return Err(HarnessError::Config(format!(
                "initial: {k} eigen indices but {} real and {} imaginary amplitudes",
                re.len(),
                im.len()
            )));
        }
        Ok(Superposition {
            sector: Sector { electrons: self.electrons, ms2: self.ms2 },
            eigen_indices: self.eigen_indices.clone(),
            amplitudes: re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagationMode {
    Exact,
    Trotter1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub times: Vec<f64>,
    #[serde(default = "default_propagation")]
    pub propagation: PropagationMode,
    #[serde(default)]
    pub trotter_steps: Option<usize>,
}

fn default_propagation() -> PropagationMode {
    PropagationMode::Exact
}

impl BasisConfig {
    pub fn spec(&self) -> Result<BasisSpec, HarnessError> {
        let propagation = match (&self.propagation, self.trotter_steps) {
            (PropagationMode::Exact, _) => Propagation::Exact,
            (PropagationMode::Trotter1, Some(steps)) => Propagation::Trotter1 { steps },
            (PropagationMode::Trotter1, None) => {
                return Err(HarnessError::Config("basis.trotter_steps is required for trotter1".into()))
            }
        };
        let spec = BasisSpec { times: self.times.clone(), propagation };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_final: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotConfig {
    /// Shots per real and per imaginary part of every estimand.
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    /// Independent noisy realizations.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ObservableConfig {
    /// Subset of labels to report; all populations (and energies) when omitted.
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    /// Adds `E_total`, `E_kinetic`, `E_potential`, `E_coulomb`.
    #[serde(default)]
    pub energies: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// Worker threads; 0 picks the machine default.
    #[serde(default)]
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarianceScanConfig {
    pub shots: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrotterScanConfig {
    pub steps: Vec<usize>,
    /// Finite shot counts to scan besides the noiseless limit.
    #[serde(default)]
    pub shots: Vec<u64>,
    #[serde(default = "default_true")]
    pub noiseless: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceConfig {
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    /// `T/dt` values tabulated besides the configured run.
    #[serde(default)]
    pub steps_grid: Vec<u64>,
}

fn default_gamma() -> f64 {
    6.0
}

fn default_epsilon() -> f64 {
    1e-3
}

fn default_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL_BASIC.to_vec()
}

impl Default for ResourceConfig {
    fn default() -> Self {
        Self { gamma: default_gamma(), epsilon: default_epsilon(), algorithms: default_algorithms(), steps_grid: vec![] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct LindepConfig {
    /// Candidate `s_1` values for a two-state basis; the first forbidden time
    /// of every selected eigengap is always added.
    #[serde(default)]
    pub s1_values: Vec<f64>,
    #[serde(default = "default_cutoff")]
    pub rel_cutoff: f64,
}

fn default_cutoff() -> f64 {
    1e-8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub name: Option<String>,
    pub system: SystemConfig,
    pub initial: InitialConfig,
    pub basis: BasisConfig,
    pub time: TimeConfig,
    #[serde(default)]
    pub shots: Option<ShotConfig>,
    #[serde(default)]
    pub observables: ObservableConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub variance_scan: Option<VarianceScanConfig>,
    #[serde(default)]
    pub trotter_scan: Option<TrotterScanConfig>,
    #[serde(default)]
    pub resource: Option<ResourceConfig>,
    #[serde(default)]
    pub lindep: Option<LindepConfig>,
    /// Directory relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self, HarnessError> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads, parses and validates a config file. Returns the raw bytes too,
    /// for hashing.
    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), HarnessError> {
        let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
        let text = std::str::from_utf8(&bytes).map_err(|_| HarnessError::Config("config is not UTF-8".into()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let cfg = Self::from_toml(text, base)?;
        Ok((cfg, bytes))
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn name(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.to_string())
    }

    /// Schema checks that need no file access.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let t = &self.time;
        if !(t.dt > 0.0) || !(t.t_final >= t.dt) || !t.t_final.is_finite() {
            return Err(HarnessError::Config(format!("time: need 0 < dt <= t_final, got dt={}, t_final={}", t.dt, t.t_final)));
        }
        if t.t_final / t.dt > MAX_STEPS {
            return Err(HarnessError::Config(format!("time: t_final/dt = {:e} exceeds {MAX_STEPS:e}", t.t_final / t.dt)));
        }
        let spec = self.basis.spec()?;
        if spec.times.iter().any(|&s| s > t.t_final) {
            return Err(HarnessError::Config("basis.times must not exceed t_final".into()));
        }
        self.initial.superposition()?;
        if let Some(s) = &self.shots {
            if s.shots == 0 || s.samples == 0 {
                return Err(HarnessError::Config("shots.shots and shots.samples must be positive".into()));
            }
        }
        let need_shots = || {
            self.shots.as_ref().ok_or_else(|| HarnessError::Config(format!("[shots] is required for {}", self.kind)))
        };
        match self.kind {
            ExperimentKind::Dynamics | ExperimentKind::ResourceTable => {}
            ExperimentKind::VarianceScan => {
                need_shots()?;
                let scan = self
                    .variance_scan
                    .as_ref()
                    .ok_or_else(|| HarnessError::Config("[variance_scan] is required".into()))?;
                if scan.shots.len() < 2 {
                    return Err(HarnessError::Config("variance_scan.shots needs at least two shot counts".into()));
                }
                if scan.shots.contains(&0) {
                    return Err(HarnessError::Config("variance_scan.shots must be positive".into()));
                }
            }
            ExperimentKind::TrotterScan => {
                let scan = self
                    .trotter_scan
                    .as_ref()
                    .ok_or_else(|| HarnessError::Config("[trotter_scan] is required".into()))?;
                if scan.steps.is_empty() || scan.steps.contains(&0) {
                    return Err(HarnessError::Config("trotter_scan.steps must be non-empty and positive".into()));
                }
                if scan.shots.contains(&0) {
                    return Err(HarnessError::Config("trotter_scan.shots must be positive".into()));
                }
                if !scan.shots.is_empty() {
                    need_shots()?;
                }
            }
            ExperimentKind::LindepReport => {
                if let Some(l) = &self.lindep {
                    if l.s1_values.iter().any(|&s| !(s > 0.0)) {
                        return Err(HarnessError::Config("lindep.s1_values must be positive".into()));
                    }
                }
            }
        }
        if let Some(r) = &self.resource {
            if !(r.gamma >= 1.0) || !(r.epsilon > 0.0) {
                return Err(HarnessError::Config("resource: need gamma >= 1 and epsilon > 0".into()));
            }
        }
        Ok(())
    }
}
