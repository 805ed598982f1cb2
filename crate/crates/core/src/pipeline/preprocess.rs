use rayon::prelude::*;

use crate::dataset::TrialSet;
use crate::wavelets::{registry_get, threshold_denoise, ThresholdRule, UniversalThreshold, WaveletError};

pub const DENOISE_WAVELET: &str = "db8";
pub const DENOISE_LEVELS: usize = 6;

/// Per-channel wavelet denoising (db8, 6 levels, universal soft threshold).
/// `on = false` returns the input unchanged.
pub fn preprocess(ts: &TrialSet, on: bool) -> Result<TrialSet, WaveletError> {
    preprocess_with(ts, on, &UniversalThreshold)
}

pub fn preprocess_with(ts: &TrialSet, on: bool, rule: &dyn ThresholdRule) -> Result<TrialSet, WaveletError> {
    if !on {
        return Ok(ts.clone());
    }
    let w = registry_get(DENOISE_WAVELET)?;
    let mut out = ts.clone();
    out.trials.par_iter_mut().try_for_each(|t| {
        for c in 0..t.channels {
            let clean = threshold_denoise(t.channel(c), &w, DENOISE_LEVELS, rule)?;
            t.channel_mut(c).copy_from_slice(&clean);
        }
        Ok::<_, WaveletError>(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Trial;
    use crate::pipeline::{generate_synthetic, SyntheticSpec};

    fn sine_set() -> (TrialSet, Vec<f64>) {
        let n = 1750;
        let clean: Vec<f64> = (0..n)
            .map(|i| (std::f64::consts::TAU * 10.0 * i as f64 / 250.0).sin())
            .collect();
        let ts = TrialSet {
            subject_id: "s".into(),
            sample_rate_hz: 250.0,
            class_names: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            trials: vec![Trial::new("t0", 1, 1, clean.clone())],
        };
        (ts, clean)
    }

    fn norm(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    #[test]
    fn off_is_identity() {
        let (ts, _) = sine_set();
        assert_eq!(preprocess(&ts, false).unwrap(), ts);
    }

    #[test]
    fn clean_signal_barely_changes() {
        let (ts, clean) = sine_set();
        let out = preprocess(&ts, true).unwrap();
        let diff: Vec<f64> = out.trials[0].data.iter().zip(&clean).map(|(a, b)| a - b).collect();
        assert!(norm(&diff) / norm(&clean) < 0.05);
    }

    #[test]
    fn spike_energy_is_reduced() {
        let spec = SyntheticSpec {
            trials_per_class: 1,
            channels: 1,
            ..SyntheticSpec::default()
        };
        let ts = generate_synthetic(&spec).unwrap();
        let x = &ts.trials[0].data;
        let rms = (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt();
        let mut spiked = ts.clone();
        let mut spikes = vec![0.0; x.len()];
        for p in [300, 901, 1402] {
            spikes[p] = 4.0 * rms;
        }
        for t in &mut spiked.trials {
            t.data.iter_mut().zip(&spikes).for_each(|(v, s)| *v += s);
        }
        let base = preprocess(&ts, true).unwrap();
        let out = preprocess(&spiked, true).unwrap();
        let residual: Vec<f64> = out.trials[0].data.iter().zip(&base.trials[0].data).map(|(a, b)| a - b).collect();
        let ratio = norm(&residual).powi(2) / norm(&spikes).powi(2);
        assert!(ratio <= 0.5, "residual spike energy ratio {ratio}");
    }
}
