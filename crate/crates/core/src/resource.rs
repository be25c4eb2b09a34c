//! Asymptotic runtime accounting for propagator-based simulation versus the
//! time-evolved-basis method. Every expression is a leading-order bound
//! evaluated with unit constant, so only ratios are meaningful.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResourceError {
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("parameter {name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} = {value} is outside the asymptotic regime (needs >= e^e)")]
    OutsideRegime { name: &'static str, value: f64 },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

/// Propagator algorithms with known runtime bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Algorithm {
    Trotter1,
    Trotter2,
    /// Order `2k` product formula.
    Trotter2k(u32),
    Qubitization,
    Lcu,
    Qsp,
    Qdrift,
}

impl Algorithm {
    pub const ALL_BASIC: [Algorithm; 6] =
        [Algorithm::Trotter1, Algorithm::Trotter2, Algorithm::Qubitization, Algorithm::Lcu, Algorithm::Qsp, Algorithm::Qdrift];
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Trotter1 => f.write_str("trotter1"),
            Algorithm::Trotter2 => f.write_str("trotter2"),
            Algorithm::Trotter2k(k) => write!(f, "trotter2k({k})"),
            Algorithm::Qubitization => f.write_str("qubitization"),
            Algorithm::Lcu => f.write_str("lcu"),
            Algorithm::Qsp => f.write_str("qsp"),
            Algorithm::Qdrift => f.write_str("qdrift"),
        }
    }
}

/// Accepts `trotter2k(3)` and `trotter2k:3` besides the plain names.
impl FromStr for Algorithm {
    type Err = ResourceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let simple = match t.as_str() {
            "trotter1" => Some(Algorithm::Trotter1),
            "trotter2" => Some(Algorithm::Trotter2),
            "qubitization" => Some(Algorithm::Qubitization),
            "lcu" => Some(Algorithm::Lcu),
            "qsp" => Some(Algorithm::Qsp),
            "qdrift" => Some(Algorithm::Qdrift),
            _ => None,
        };
        if let Some(a) = simple {
            return Ok(a);
        }
        let k = t
            .strip_prefix("trotter2k")
            .and_then(|rest| {
                rest.strip_prefix(':')
                    .or_else(|| rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
            })
            .and_then(|k| k.trim().parse::<u32>().ok())
            .filter(|&k| k >= 1);
        k.map(Algorithm::Trotter2k).ok_or_else(|| ResourceError::UnknownAlgorithm(s.to_string()))
    }
}

impl TryFrom<String> for Algorithm {
    type Error = ResourceError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> String {
        a.to_string()
    }
}

/// Inputs to one propagator-cost bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostFormula {
    pub algorithm: Algorithm,
    /// Pauli term count.
    pub l: f64,
    /// Evolution time of the propagator.
    pub t: f64,
    pub epsilon: f64,
    /// Largest absolute matrix element of `H`.
    pub h_max: f64,
    /// Sum of absolute Pauli coefficients.
    pub lambda: f64,
}

impl CostFormula {
    pub fn with_time(self, t: f64) -> Self {
        Self { t, ..self }
    }

    pub fn with_terms(self, l: f64) -> Self {
        Self { l, ..self }
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64, ResourceError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ResourceError::NonPositive { name, value })
    }
}

/// `ln x / ln ln x`, restricted to `x >= e^e` where it is increasing and at least 1.
fn log_over_loglog(name: &'static str, x: f64) -> Result<f64, ResourceError> {
    if !(x >= std::f64::consts::E.powf(std::f64::consts::E)) || !x.is_finite() {
        return Err(ResourceError::OutsideRegime { name, value: x });
    }
    Ok(x.ln() / x.ln().ln())
}

/// Cost of one `e^{-iHt}` to accuracy `epsilon`.
pub fn propagator_cost(f: &CostFormula) -> Result<f64, ResourceError> {
    let l = positive("L", f.l)?;
    let t = positive("t", f.t)?;
    let eps = positive("epsilon", f.epsilon)?;
    let cost = match f.algorithm {
        Algorithm::Trotter1 => {
            let h = positive("h_max", f.h_max)?;
            l.powi(3) * (t * h).powi(2) / eps
        }
        Algorithm::Trotter2 => {
            let h = positive("h_max", f.h_max)?;
            l.powf(2.5) * (t * h).powf(1.5) / eps.sqrt()
        }
        Algorithm::Trotter2k(k) => {
            if k == 0 {
                return Err(ResourceError::UnknownAlgorithm("trotter2k(0)".into()));
            }
            let h = positive("h_max", f.h_max)?;
            let inv = 1.0 / (2.0 * k as f64);
            25f64.powi(k as i32) * l * (l * t * h).powf(1.0 + inv) / eps.powf(inv)
        }
        Algorithm::Qubitization => {
            let lambda = positive("lambda", f.lambda)?;
            t * lambda + log_over_loglog("1/epsilon", 1.0 / eps)?
        }
        Algorithm::Lcu => {
            let lambda = positive("lambda", f.lambda)?;
            t * lambda * log_over_loglog("t*lambda/epsilon", t * lambda / eps)?
        }
        Algorithm::Qsp => {
            let h = positive("h_max", f.h_max)?;
            t * h + log_over_loglog("1/epsilon", 1.0 / eps)?
        }
        Algorithm::Qdrift => {
            let lambda = positive("lambda", f.lambda)?;
            (t * lambda).powi(2) / eps
        }
    };
    Ok(cost)
}

/// A simulation task to be costed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    /// Basis size.
    pub n: usize,
    /// Pauli term count.
    pub l: f64,
    pub t_total: f64,
    pub dt: f64,
    /// Controlled-propagator overhead factor.
    pub gamma: f64,
    pub epsilon: f64,
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<(), ResourceError> {
        if self.n == 0 {
            return Err(ResourceError::InvalidScenario("n must be at least 1".into()));
        }
        positive("L", self.l)?;
        positive("T", self.t_total)?;
        positive("dt", self.dt)?;
        positive("epsilon", self.epsilon)?;
        if !(self.gamma >= 1.0) || !self.gamma.is_finite() {
            return Err(ResourceError::InvalidScenario(format!("gamma must be >= 1, got {}", self.gamma)));
        }
        Ok(())
    }

    pub fn steps(&self) -> f64 {
        self.t_total / self.dt
    }

    fn step_cost(&self, f: &CostFormula) -> Result<f64, ResourceError> {
        let f = CostFormula { epsilon: self.epsilon, ..*f }.with_time(self.dt).with_terms(self.l);
        propagator_cost(&f)
    }
}

/// Fresh state preparation at every step for every Pauli term, with the
/// factor-2 parallelization: `(1/4)(T/dt)(T/dt + 1) L Poly`.
pub fn standard_method_cost(p: &ScenarioParams, f: &CostFormula) -> Result<f64, ResourceError> {
    p.validate()?;
    let m = p.steps();
    Ok(0.25 * m * (m + 1.0) * p.l * p.step_cost(f)?)
}

/// Cost of estimating every overlap and Pauli estimand.
///
/// With `s_times` the sum `4 gamma L sum_{j,k} |s_j - s_k| / dt` is used;
/// otherwise the bound `4 gamma n^2 (T/dt) L`. Both are multiplied by the
/// per-step cost.
pub fn qas_cost(p: &ScenarioParams, f: &CostFormula, s_times: Option<&[f64]>) -> Result<f64, ResourceError> {
    p.validate()?;
    let poly = p.step_cost(f)?;
    let propagations = match s_times {
        Some(s) => {
            if s.len() != p.n {
                return Err(ResourceError::InvalidScenario(format!("{} parameter times for n = {}", s.len(), p.n)));
            }
            let offsets: f64 = s.iter().flat_map(|a| s.iter().map(move |b| (a - b).abs())).sum();
            offsets / p.dt
        }
        None => (p.n * p.n) as f64 * p.steps(),
    };
    Ok(4.0 * p.gamma * p.l * propagations * poly)
}

/// Step count `16 gamma n^2 - 1` beyond which the bound form of
/// [`qas_cost`] undercuts [`standard_method_cost`].
pub fn crossover_threshold(p: &ScenarioParams) -> f64 {
    16.0 * p.gamma * (p.n * p.n) as f64 - 1.0
}

/// Rounded rule of thumb `100 n^2`.
pub fn heuristic_threshold(n: usize) -> u64 {
    100 * (n * n) as u64
}
