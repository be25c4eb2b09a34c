//! Dominant-frequency estimation for uniformly sampled real series.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Zero-padding factor applied on top of rounding up to a power of two.
pub const PAD_FACTOR: usize = 16;

/// Peak of the mean-removed, zero-padded periodogram, refined by a parabola
/// through the peak bin and its neighbours. Returns cycles per unit time, or
/// `None` for series too short or flat to have a peak.
pub fn dominant_frequency(values: &[f64], dt: f64) -> Option<f64> {
    if values.len() < 4 || !(dt > 0.0) {
        return None;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let len = (values.len().next_power_of_two()) * PAD_FACTOR;
    let mut buf: Vec<Complex64> = values.iter().map(|v| Complex64::new(v - mean, 0.0)).collect();
    buf.resize(len, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);

    let power: Vec<f64> = buf[..len / 2 + 1].iter().map(|z| z.norm_sqr()).collect();
    let (k, &peak) = power.iter().enumerate().skip(1).max_by(|a, b| a.1.total_cmp(b.1))?;
    if !(peak > 0.0) {
        return None;
    }
    let mut offset = 0.0;
    if k + 1 < power.len() {
        let (a, b, c) = (power[k - 1], peak, power[k + 1]);
        let denom = a - 2.0 * b + c;
        if denom != 0.0 {
            offset = (0.5 * (a - c) / denom).clamp(-0.5, 0.5);
        }
    }
    Some((k as f64 + offset) / (len as f64 * dt))
}

/// Frequency resolution `1 / T` of a record of duration `T`, in cycles per unit time.
pub fn resolution(duration: f64) -> f64 {
    1.0 / duration
}
