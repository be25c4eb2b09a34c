use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrices::{quadratic_form, QasMatrices};
use super::{CMatrix, EngineError};
use crate::statevector::{hermitian_eigh, StateVector};

/// Regularization of the overlap solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Eigenvalues of `F` below `rel_cutoff * lambda_max` are discarded.
    pub rel_cutoff: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { rel_cutoff: 1e-8 }
    }
}

/// `alpha(t)` on the grid `0, dt, ..., steps*dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTrajectory {
    pub times: Vec<f64>,
    dim: usize,
    alphas: Vec<Complex64>,
    /// `A = -i F^+ H`, so that `d alpha/dt = A alpha`.
    pub generator: CMatrix,
    /// Eigenvalues of `F` dropped by the pseudo-inverse.
    pub truncated: usize,
}

impl CoefficientTrajectory {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn alpha(&self, step: usize) -> &[Complex64] {
        &self.alphas[step * self.dim..(step + 1) * self.dim]
    }

    pub fn alphas(&self) -> impl Iterator<Item = &[Complex64]> {
        self.alphas.chunks_exact(self.dim)
    }

    /// `A alpha` at a grid point.
    pub fn derivative(&self, step: usize) -> Vec<Complex64> {
        mat_vec(&self.generator, self.alpha(step))
    }
}

/// Number of steps covering `[0, t_final]`; a small slack absorbs binary
/// rounding such as `4.0 / 0.001 = 3999.999...`.
pub fn step_count(t_final: f64, dt: f64) -> Result<usize, EngineError> {
    if !(dt > 0.0) || !dt.is_finite() || !t_final.is_finite() || t_final < dt {
        return Err(EngineError::InvalidTime(format!("need 0 < dt <= T, got dt = {dt}, T = {t_final}")));
    }
    Ok((t_final / dt + 1e-9).floor() as usize)
}

/// Eigen pseudo-inverse of a Hermitian matrix; returns it with the number of
/// discarded eigenvalues.
pub fn pseudo_inverse(f: &CMatrix, rel_cutoff: f64) -> Result<(CMatrix, usize), EngineError> {
    let (vals, vecs) = hermitian_eigh(f.clone());
    let lmax = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(lmax > 0.0) || !lmax.is_finite() {
        return Err(EngineError::SingularOverlap(lmax));
    }
    let cutoff = rel_cutoff * lmax;
    let n = f.nrows();
    let mut inv = CMatrix::zeros(n, n);
    let mut dropped = 0;
    for (k, &l) in vals.iter().enumerate() {
        if l < cutoff {
            dropped += 1;
            continue;
        }
        let v = vecs.column(k);
        inv += (v * v.adjoint()).map(|z| z / l);
    }
    Ok((inv, dropped))
}

fn mat_vec(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)] * v[c]).sum()).collect()
}

/// [`solve_dynamics_with`] using default solver options.
pub fn solve_dynamics(m: &QasMatrices, t_final: f64, dt: f64) -> Result<CoefficientTrajectory, EngineError> {
    solve_dynamics_with(m, t_final, dt, SolverOptions::default())
}

/// Integrates `F d alpha/dt = -i H alpha` from `alpha(0) = e_0` with classical RK4.
///
/// The system is linear and autonomous, so one RK4 step is the fixed matrix
/// `I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24`, built once.
pub fn solve_dynamics_with(
    m: &QasMatrices,
    t_final: f64,
    dt: f64,
    opts: SolverOptions,
) -> Result<CoefficientTrajectory, EngineError> {
    let steps = step_count(t_final, dt)?;
    let n = m.dim();
    if m.h.nrows() != n || m.h.ncols() != n {
        return Err(EngineError::DimensionMismatch("F and H differ in size".into()));
    }
    let (f_inv, truncated) = pseudo_inverse(&m.f, opts.rel_cutoff)?;
    let generator = (f_inv * &m.h) * Complex64::new(0.0, -1.0);

    let ha = &generator * Complex64::new(dt, 0.0);
    let ha2 = &ha * &ha;
    let ha3 = &ha2 * &ha;
    let ha4 = &ha3 * &ha;
    let c = |x: f64| Complex64::new(x, 0.0);
    let propagator = CMatrix::identity(n, n) + &ha + ha2 * c(0.5) + ha3 * c(1.0 / 6.0) + ha4 * c(1.0 / 24.0);

    let mut alphas = Vec::with_capacity((steps + 1) * n);
    let mut alpha = vec![Complex64::new(0.0, 0.0); n];
    alpha[0] = Complex64::new(1.0, 0.0);
    alphas.extend_from_slice(&alpha);
    for step in 1..=steps {
        alpha = mat_vec(&propagator, &alpha);
        if alpha.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(EngineError::NonFinite { step, time: step as f64 * dt });
        }
        alphas.extend_from_slice(&alpha);
    }
    let times = (0..=steps).map(|k| k as f64 * dt).collect();
    Ok(CoefficientTrajectory { times, dim: n, alphas, generator, truncated })
}

/// Real part of `alpha^dagger O alpha` per step, with the largest imaginary
/// residual seen.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub values: Vec<f64>,
    pub max_imag: f64,
}

pub fn observable_trajectory(
    m: &QasMatrices,
    traj: &CoefficientTrajectory,
    label: &str,
) -> Result<ObservableSeries, EngineError> {
    let o = m.observable(label)?;
    Ok(matrix_trajectory(o, traj))
}

/// [`observable_trajectory`] for an arbitrary matrix, e.g. `H` or `F`.
pub fn matrix_trajectory(o: &CMatrix, traj: &CoefficientTrajectory) -> ObservableSeries {
    let mut max_imag = 0.0f64;
    let values = traj
        .alphas()
        .map(|a| {
            let z = quadratic_form(a, o, a);
            max_imag = max_imag.max(z.im.abs());
            z.re
        })
        .collect();
    ObservableSeries { values, max_imag }
}

/// `alpha^dagger H2 alpha - alpha'^dagger F alpha'` per step.
pub fn min_error_overlap(m: &QasMatrices, traj: &CoefficientTrajectory) -> Result<Vec<f64>, EngineError> {
    let h2 = m.h2.as_ref().ok_or(EngineError::MissingH2)?;
    Ok((0..traj.len())
        .map(|k| {
            let a = traj.alpha(k);
            let da = traj.derivative(k);
            (quadratic_form(a, h2, a) - quadratic_form(&da, &m.f, &da)).re
        })
        .collect())
}

/// `sum_j alpha_j |psi_j>`.
pub fn represented_state(basis: &[StateVector], alpha: &[Complex64]) -> Result<StateVector, EngineError> {
    if basis.len() != alpha.len() || basis.is_empty() {
        return Err(EngineError::DimensionMismatch(format!(
            "{} basis states, {} coefficients",
            basis.len(),
            alpha.len()
        )));
    }
    let mut out = basis[0].scaled(alpha[0]);
    for (v, &a) in basis.iter().zip(alpha).skip(1) {
        out = out.axpy(a, v)?;
    }
    Ok(out)
}

/// `|<a|b>|^2 / (<a|a><b|b>)`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, EngineError> {
    let ab = a.inner(b)?.norm_sqr();
    let na = a.norm().powi(2);
    let nb = b.norm().powi(2);
    Ok(if na == 0.0 || nb == 0.0 { 0.0 } else { ab / (na * nb) })
}
