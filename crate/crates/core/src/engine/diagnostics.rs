use std::f64::consts::PI;

use serde::Serialize;

use super::CMatrix;
use crate::statevector::hermitian_eigh;

/// Spectrum of an overlap matrix and the times at which a two-level basis
/// collapses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinIndependenceReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub determinant: f64,
    /// `lambda_max / lambda_min`; infinite when `lambda_min <= 0`.
    pub condition_number: f64,
    pub rel_cutoff: f64,
    /// `lambda_min < rel_cutoff * lambda_max`.
    pub singular: bool,
    pub parameter_times: Vec<f64>,
    /// For each supplied gap `de`: `2 pi k / de` for `k >= 1` up to the horizon.
    pub forbidden_times: Vec<ForbiddenTimes>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForbiddenTimes {
    pub gap: f64,
    pub times: Vec<f64>,
}

impl LinIndependenceReport {
    pub fn passes(&self) -> bool {
        !self.singular
    }
}

pub fn lin_independence_report(
    f: &CMatrix,
    eigengaps: Option<&[f64]>,
    parameter_times: &[f64],
    horizon: f64,
    rel_cutoff: f64,
) -> LinIndependenceReport {
    let (eigenvalues, _) = hermitian_eigh(f.clone());
    let lmin = eigenvalues.first().copied().unwrap_or(0.0);
    let lmax = eigenvalues.last().copied().unwrap_or(0.0);
    let determinant = eigenvalues.iter().product();
    let condition_number = if lmin > 0.0 { lmax / lmin } else { f64::INFINITY };
    let singular = !(lmax > 0.0) || lmin < rel_cutoff * lmax;
    let forbidden_times = eigengaps
        .unwrap_or(&[])
        .iter()
        .filter(|g| g.abs() > 0.0 && g.is_finite())
        .map(|&gap| {
            let period = 2.0 * PI / gap.abs();
            let times = (1..).map(|k| k as f64 * period).take_while(|&t| t <= horizon).collect();
            ForbiddenTimes { gap, times }
        })
        .collect();
    LinIndependenceReport {
        eigenvalues,
        determinant,
        condition_number,
        rel_cutoff,
        singular,
        parameter_times: parameter_times.to_vec(),
        forbidden_times,
    }
}
