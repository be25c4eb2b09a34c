//! Shot-noise model for Hadamard-test estimands.
//!
//! Each real or imaginary part `c` of an estimand is replaced by a draw from
//! `Normal(c, sqrt((1 - c^2) / N_s))`. Draws are unclipped. Every distinct
//! Pauli string is sampled once per element and shared by all operators that
//! contain it; the identity reuses the sampled overlap.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::matrices::{EstimandTable, QasMatrices};
use super::{CMatrix, EngineError};

/// Shots per real and per imaginary part, and the RNG stream to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotModel {
    pub shots: u64,
    pub seed: u64,
    /// Independent sample index under the same master seed.
    pub stream: u64,
}

impl ShotModel {
    pub fn new(shots: u64, seed: u64, stream: u64) -> Result<Self, EngineError> {
        if shots == 0 {
            return Err(EngineError::InvalidShots);
        }
        Ok(Self { shots, seed, stream })
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Standard deviation of a single estimate with mean `c`.
pub fn shot_sd(c: f64, shots: u64) -> f64 {
    ((1.0 - c * c).max(0.0) / shots as f64).sqrt()
}

struct Sampler {
    rng: ChaCha20Rng,
    shots: u64,
}

impl Sampler {
    fn draw(&mut self, c: f64) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        c + shot_sd(c, self.shots) * z
    }

    /// Upper triangle sampled, lower filled by conjugation. Diagonal gets a
    /// real draw, or is copied verbatim when `fixed_diagonal`.
    fn hermitian(&mut self, exact: &CMatrix, fixed_diagonal: bool) -> CMatrix {
        let n = exact.nrows();
        let mut out = CMatrix::zeros(n, n);
        for j in 0..n {
            out[(j, j)] = if fixed_diagonal {
                exact[(j, j)]
            } else {
                Complex64::new(self.draw(exact[(j, j)].re), 0.0)
            };
            for k in j + 1..n {
                let c = exact[(j, k)];
                let z = Complex64::new(self.draw(c.re), self.draw(c.im));
                out[(j, k)] = z;
                out[(k, j)] = z.conj();
            }
        }
        out
    }
}

/// Draws one noisy estimand table. Order of draws: overlap, then strings in
/// their canonical order, each upper triangle row by row.
pub fn sample_table(exact: &EstimandTable, model: &ShotModel) -> Result<EstimandTable, EngineError> {
    if model.shots == 0 {
        return Err(EngineError::InvalidShots);
    }
    let mut s = Sampler { rng: model.rng(), shots: model.shots };
    let mut overlap = s.hermitian(&exact.overlap, true);
    for j in 0..overlap.nrows() {
        overlap[(j, j)] = Complex64::new(1.0, 0.0);
    }
    let mut strings = BTreeMap::new();
    for (p, m) in &exact.strings {
        strings.insert(*p, s.hermitian(m, false));
    }
    Ok(EstimandTable { overlap, strings })
}

/// One shot-noise realization of `exact`, which must carry its estimand model.
pub fn sample_matrices(exact: &QasMatrices, model: &ShotModel) -> Result<QasMatrices, EngineError> {
    let est = exact.estimands.as_ref().ok_or(EngineError::MissingEstimands)?;
    let table = sample_table(&est.table, model)?;
    est.matrices(&table)
}
