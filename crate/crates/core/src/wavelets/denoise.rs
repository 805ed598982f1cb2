use super::{dwt, idwt, DwtCoeffs, WaveletError, WaveletFilter};

/// Chooses one soft threshold per detail band (`details[j]` order).
pub trait ThresholdRule: Send + Sync {
    fn thresholds(&self, coeffs: &DwtCoeffs, signal_len: usize) -> Vec<f64>;
}

/// Universal threshold `sigma * sqrt(2 ln n)`, with `sigma` the median
/// absolute deviation of the finest detail band over 0.6745, applied to
/// every detail band.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniversalThreshold;

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

impl ThresholdRule for UniversalThreshold {
    fn thresholds(&self, coeffs: &DwtCoeffs, signal_len: usize) -> Vec<f64> {
        let finest = coeffs.details.first().map(|d| d.as_slice()).unwrap_or(&[]);
        let sigma = median(finest.iter().map(|v| v.abs()).collect()) / 0.6745;
        let t = sigma * (2.0 * (signal_len.max(2) as f64).ln()).sqrt();
        vec![t; coeffs.levels()]
    }
}

fn soft(v: f64, t: f64) -> f64 {
    let m = v.abs() - t;
    if m > 0.0 {
        m.copysign(v)
    } else {
        0.0
    }
}

/// DWT, per-band soft thresholding of the detail coefficients, inverse DWT.
/// The approximation band is kept as is.
pub fn threshold_denoise(
    signal: &[f64],
    w: &WaveletFilter,
    levels: usize,
    rule: &dyn ThresholdRule,
) -> Result<Vec<f64>, WaveletError> {
    let mut c = dwt(signal, w, levels)?;
    let thresholds = rule.thresholds(&c, signal.len());
    for (band, &t) in c.details.iter_mut().zip(&thresholds) {
        band.iter_mut().for_each(|v| *v = soft(*v, t));
    }
    Ok(idwt(&c, w))
}
