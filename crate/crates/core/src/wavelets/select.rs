use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{registry_get, wavelet_function_samples, WaveletError};

/// Cascade depth used to sample each candidate wavelet before resampling.
const CASCADE_ITERATIONS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletScore {
    pub name: String,
    pub mean_xcorr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletSelection {
    /// Candidates sorted by descending mean correlation.
    pub ranking: Vec<WaveletScore>,
    /// Signals skipped because they have zero variance.
    pub skipped_constant: usize,
}

impl WaveletSelection {
    pub fn best(&self) -> Option<&WaveletScore> {
        self.ranking.first()
    }
}

/// Linear resampling of `v` onto `n` points spanning the same support.
fn resample(v: &[f64], n: usize) -> Vec<f64> {
    if v.len() == 1 || n == 1 {
        return vec![v[0]; n];
    }
    let scale = (v.len() - 1) as f64 / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let t = i as f64 * scale;
            let k = (t.floor() as usize).min(v.len() - 2);
            let frac = t - k as f64;
            v[k] * (1.0 - frac) + v[k + 1] * frac
        })
        .collect()
}

fn centered(v: &[f64]) -> (Vec<f64>, f64) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let c: Vec<f64> = v.iter().map(|x| x - mean).collect();
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    (c, norm)
}

/// Maximum absolute Pearson correlation between `x` and every circular shift
/// of `y` (equal lengths). Returns `None` when either input has zero variance.
pub fn pearson_max_circular(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "pearson_max_circular needs equal lengths");
    let n = x.len();
    let (xc, xn) = centered(x);
    let (yc, yn) = centered(y);
    if xn == 0.0 || yn == 0.0 || n == 0 {
        return None;
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut fx: Vec<Complex64> = xc.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut fy: Vec<Complex64> = yc.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut fx);
    fwd.process(&mut fy);
    let mut prod: Vec<Complex64> = fx.iter().zip(&fy).map(|(a, b)| a * b.conj()).collect();
    inv.process(&mut prod);
    let best = prod
        .iter()
        .map(|c| (c.re / n as f64).abs())
        .fold(0.0, f64::max);
    Some((best / (xn * yn)).min(1.0))
}

/// Ranks candidate mother wavelets by their mean correlation with `signals`.
///
/// Each wavelet is cascade-sampled, linearly resampled to the signal length
/// and correlated against the signal at every circular lag; the best absolute
/// Pearson coefficient is averaged over all non-constant signals.
pub fn select_wavelet(
    signals: &[&[f64]],
    candidates: &[&str],
) -> Result<WaveletSelection, WaveletError> {
    if candidates.is_empty() {
        return Err(WaveletError::InvalidArgument("no candidate wavelets".into()));
    }
    let skipped_constant = signals
        .iter()
        .filter(|s| centered(s).1 == 0.0)
        .count();
    let mut ranking = Vec::with_capacity(candidates.len());
    for &name in candidates {
        let w = registry_get(name)?;
        let psi = wavelet_function_samples(&w, CASCADE_ITERATIONS)?;
        let mut sum = 0.0;
        let mut count = 0usize;
        let mut cache: Option<(usize, Vec<f64>)> = None;
        for s in signals {
            if cache.as_ref().map(|(n, _)| *n) != Some(s.len()) {
                cache = Some((s.len(), resample(&psi, s.len())));
            }
            let y = &cache.as_ref().expect("filled above").1;
            if let Some(r) = pearson_max_circular(s, y) {
                sum += r;
                count += 1;
            }
        }
        let mean_xcorr = if count == 0 { 0.0 } else { sum / count as f64 };
        ranking.push(WaveletScore {
            name: w.name,
            mean_xcorr,
        });
    }
    ranking.sort_by(|a, b| b.mean_xcorr.total_cmp(&a.mean_xcorr));
    Ok(WaveletSelection {
        ranking,
        skipped_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn naive(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let (xc, xn) = centered(x);
        let (yc, yn) = centered(y);
        (0..n)
            .map(|lag| {
                let s: f64 = (0..n).map(|i| xc[i] * yc[(i + lag) % n]).sum();
                (s / (xn * yn)).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn fft_route_matches_direct_sum() {
        let mut rng = crate::seeds::rng(4);
        let x: Vec<f64> = (0..97).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..97).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = pearson_max_circular(&x, &y).unwrap();
        assert!((a - naive(&x, &y)).abs() < 1e-12);
    }

    #[test]
    fn self_and_negated_correlation() {
        let psi = wavelet_function_samples(&registry_get("db4").unwrap(), CASCADE_ITERATIONS).unwrap();
        let y = resample(&psi, 750);
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        let sel = select_wavelet(&[&y], &["db4"]).unwrap();
        assert!((sel.ranking[0].mean_xcorr - 1.0).abs() < 1e-12);
        let sel = select_wavelet(&[&neg], &["db4"]).unwrap();
        assert!((sel.ranking[0].mean_xcorr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_signals_are_skipped_and_counted() {
        let flat = vec![2.0; 100];
        let ramp: Vec<f64> = (0..100).map(|i| (i as f64 * 0.3).sin()).collect();
        let sel = select_wavelet(&[&flat, &ramp], &["haar", "db2"]).unwrap();
        assert_eq!(sel.skipped_constant, 1);
        assert!(sel.ranking.iter().all(|s| (0.0..=1.0).contains(&s.mean_xcorr)));
        assert!(sel.ranking[0].mean_xcorr >= sel.ranking[1].mean_xcorr);
    }

    #[test]
    fn ranking_invariant_under_positive_scaling() {
        let mut rng = crate::seeds::rng(8);
        let sigs: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..200).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let scaled: Vec<Vec<f64>> = sigs.iter().map(|s| s.iter().map(|v| v * 37.5).collect()).collect();
        let names = ["haar", "db4", "sym3", "coif1", "fk6"];
        let a = select_wavelet(&sigs.iter().map(|s| &s[..]).collect::<Vec<_>>(), &names).unwrap();
        let b = select_wavelet(&scaled.iter().map(|s| &s[..]).collect::<Vec<_>>(), &names).unwrap();
        let na: Vec<_> = a.ranking.iter().map(|s| &s.name).collect();
        let nb: Vec<_> = b.ranking.iter().map(|s| &s.name).collect();
        assert_eq!(na, nb);
    }

    #[test]
    fn empty_candidates_and_unknown_names() {
        let x = [1.0, 2.0, 3.0];
        assert!(select_wavelet(&[&x], &[]).is_err());
        assert!(matches!(
            select_wavelet(&[&x], &["wat"]),
            Err(WaveletError::UnknownWavelet(_))
        ));
    }
}
