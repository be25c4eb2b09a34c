//! Small descriptive statistics over seeds.

use serde::Serialize;

/// Pointwise statistics of equally long series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesStats {
    pub mean: Vec<f64>,
    /// Sample standard deviation (`n - 1` denominator; zero for one series).
    pub sd: Vec<f64>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl SeriesStats {
    pub fn from_series<'a>(series: impl IntoIterator<Item = &'a [f64]>) -> Option<Self> {
        let all: Vec<&[f64]> = series.into_iter().collect();
        let len = all.first()?.len();
        if all.iter().any(|s| s.len() != len) {
            return None;
        }
        let count = all.len() as f64;
        let mut out = SeriesStats {
            mean: vec![0.0; len],
            sd: vec![0.0; len],
            min: vec![f64::INFINITY; len],
            max: vec![f64::NEG_INFINITY; len],
        };
        for s in &all {
            for (i, &v) in s.iter().enumerate() {
                out.mean[i] += v;
                out.min[i] = out.min[i].min(v);
                out.max[i] = out.max[i].max(v);
            }
        }
        out.mean.iter_mut().for_each(|m| *m /= count);
        if all.len() > 1 {
            for s in &all {
                for (i, &v) in s.iter().enumerate() {
                    out.sd[i] += (v - out.mean[i]).powi(2);
                }
            }
            out.sd.iter_mut().for_each(|v| *v = (*v / (count - 1.0)).sqrt());
        }
        Some(out)
    }

    /// `max_t sd(t) / |mean(t)|`, skipping points with a vanishing mean.
    pub fn max_fractional_sd(&self) -> f64 {
        self.sd
            .iter()
            .zip(&self.mean)
            .filter(|(_, m)| m.abs() > 1e-12)
            .map(|(s, m)| s / m.abs())
            .fold(0.0, f64::max)
    }

    /// `max_t (max - min) / (2 |mean|)`.
    pub fn max_fractional_half_range(&self) -> f64 {
        self.max
            .iter()
            .zip(&self.min)
            .zip(&self.mean)
            .filter(|(_, m)| m.abs() > 1e-12)
            .map(|((hi, lo), m)| (hi - lo) / (2.0 * m.abs()))
            .fold(0.0, f64::max)
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance with `n - 1` denominator.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Least-squares slope of `y` against `x`.
pub fn slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}
