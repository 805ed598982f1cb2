//! Synthetic four-class motor-imagery stand-in.
//!
//! Every (trial, channel) signal is the sum of
//!
//! * a sinusoid at a frequency drawn uniformly from the class band
//!   `center_hz +- bandwidth_hz / 2`, random phase, amplitude `amplitude`;
//! * an AR(2) resonator texture with its pole at the class center frequency
//!   and pole radius `ar_radius`, scaled to standard deviation `texture`;
//! * unit-variance pink (1/f) background noise times `noise_level`.
//!
//! The default bands (8-12, 16-20, 24-28, 36-40 Hz) do not overlap, so the
//! classes are separable by construction.

use rustfft::num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dataset::{ClassId, Trial, TrialSet, DEFAULT_CLASS_NAMES, NUM_CLASSES};
use crate::seeds;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassProfile {
    pub center_hz: f64,
    pub bandwidth_hz: f64,
    pub amplitude: f64,
    pub texture: f64,
    pub ar_radius: f64,
}

impl ClassProfile {
    fn new(center_hz: f64) -> Self {
        ClassProfile {
            center_hz,
            bandwidth_hz: 4.0,
            amplitude: 1.0,
            texture: 0.5,
            ar_radius: 0.97,
        }
    }

    pub fn band(&self) -> (f64, f64) {
        (self.center_hz - self.bandwidth_hz / 2.0, self.center_hz + self.bandwidth_hz / 2.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub classes: Vec<ClassProfile>,
    pub trials_per_class: usize,
    pub channels: usize,
    pub sample_rate_hz: f64,
    pub trial_seconds: f64,
    pub noise_level: f64,
    pub seed: u64,
    pub subject_id: String,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            classes: [10.0, 18.0, 26.0, 38.0].into_iter().map(ClassProfile::new).collect(),
            trials_per_class: 40,
            channels: 3,
            sample_rate_hz: 250.0,
            trial_seconds: 7.0,
            noise_level: 0.5,
            seed: 7,
            subject_id: "synthetic".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid synthetic spec: {0}")]
pub struct SpecError(pub String);

impl SyntheticSpec {
    pub fn samples_per_trial(&self) -> usize {
        (self.trial_seconds * self.sample_rate_hz).round() as usize
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let err = |m: String| Err(SpecError(m));
        if self.classes.len() != NUM_CLASSES {
            return err(format!("expected {NUM_CLASSES} class profiles, found {}", self.classes.len()));
        }
        if self.trials_per_class == 0 || self.channels == 0 {
            return err("trials_per_class and channels must be positive".into());
        }
        if !(self.sample_rate_hz > 0.0) || !(self.trial_seconds > 0.0) || self.samples_per_trial() < 2 {
            return err("sample rate and trial length must be positive".into());
        }
        if !(self.noise_level >= 0.0) || !self.noise_level.is_finite() {
            return err(format!("noise level {}", self.noise_level));
        }
        let nyquist = self.sample_rate_hz / 2.0;
        for (k, c) in self.classes.iter().enumerate() {
            let (lo, hi) = c.band();
            if !(c.bandwidth_hz >= 0.0) || lo <= 0.0 || hi >= nyquist {
                return err(format!("class {}: band [{lo}, {hi}] Hz outside (0, {nyquist})", k + 1));
            }
            if !(c.amplitude >= 0.0) || !(c.texture >= 0.0) {
                return err(format!("class {}: negative amplitude", k + 1));
            }
            if !(0.0..1.0).contains(&c.ar_radius) {
                return err(format!("class {}: AR pole radius {} not in [0, 1)", k + 1, c.ar_radius));
            }
        }
        Ok(())
    }
}

/// Unit-variance 1/f noise by spectral shaping of white Gaussian noise.
pub fn pink_noise(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut buf: Vec<Complex<f64>> = (0..n)
        .map(|_| Complex::new(StandardNormal.sample(rng), 0.0))
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    buf[0] = Complex::new(0.0, 0.0);
    for (k, v) in buf.iter_mut().enumerate().skip(1) {
        let f = k.min(n - k) as f64;
        *v /= f.sqrt();
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let x: Vec<f64> = buf.iter().map(|c| c.re).collect();
    unit_variance(x)
}

fn unit_variance(mut x: Vec<f64>) -> Vec<f64> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    for v in &mut x {
        *v = if sd > 0.0 { (*v - mean) / sd } else { 0.0 };
    }
    x
}

fn resonator(n: usize, center_hz: f64, fs: f64, radius: f64, rng: &mut impl Rng) -> Vec<f64> {
    let a1 = 2.0 * radius * (2.0 * std::f64::consts::PI * center_hz / fs).cos();
    let a2 = -radius * radius;
    let burn = 500;
    let mut x = vec![0.0; n + burn];
    for i in 2..x.len() {
        let e: f64 = StandardNormal.sample(rng);
        x[i] = a1 * x[i - 1] + a2 * x[i - 2] + e;
    }
    unit_variance(x.split_off(burn))
}

fn channel_signal(p: &ClassProfile, spec: &SyntheticSpec, rng: &mut impl Rng) -> Vec<f64> {
    let n = spec.samples_per_trial();
    let fs = spec.sample_rate_hz;
    let (lo, hi) = p.band();
    let f = if hi > lo { rng.random_range(lo..hi) } else { lo };
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let texture = resonator(n, p.center_hz, fs, p.ar_radius, rng);
    let background = pink_noise(n, rng);
    (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            p.amplitude * (std::f64::consts::TAU * f * t + phase).sin()
                + p.texture * texture[i]
                + spec.noise_level * background[i]
        })
        .collect()
}

/// Generates a class-balanced trial set. Trial `i` of class `c` is seeded from
/// `(seed, trial index)`, so the output does not depend on generation order.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<TrialSet, SpecError> {
    spec.validate()?;
    let mut trials = Vec::with_capacity(NUM_CLASSES * spec.trials_per_class);
    for c in 0..NUM_CLASSES {
        for t in 0..spec.trials_per_class {
            let index = c * spec.trials_per_class + t;
            let mut rng = seeds::rng(seeds::derive(spec.seed, index as u64));
            let mut data = Vec::with_capacity(spec.channels * spec.samples_per_trial());
            for _ in 0..spec.channels {
                data.extend(channel_signal(&spec.classes[c], spec, &mut rng));
            }
            trials.push(Trial::new(format!("t{index:04}"), c as ClassId + 1, spec.channels, data));
        }
    }
    Ok(TrialSet {
        subject_id: spec.subject_id.clone(),
        sample_rate_hz: spec.sample_rate_hz,
        class_names: DEFAULT_CLASS_NAMES.iter().map(|s| s.to_string()).collect(),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodogram_peak_hz(x: &[f64], fs: f64) -> f64 {
        let n = x.len();
        let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let k = (1..n / 2).max_by(|&a, &b| buf[a].norm_sqr().total_cmp(&buf[b].norm_sqr())).unwrap();
        k as f64 * fs / n as f64
    }

    #[test]
    fn defaults_validate_and_have_expected_shape() {
        let spec = SyntheticSpec::default();
        let ts = generate_synthetic(&spec).unwrap();
        ts.validate().unwrap();
        assert_eq!(ts.trials.len(), 160);
        assert_eq!(ts.channels(), 3);
        assert_eq!(ts.samples_per_trial(), 1750);
        for c in 1..=4 {
            assert_eq!(ts.trials.iter().filter(|t| t.label == c).count(), 40);
        }
    }

    #[test]
    fn noiseless_spectra_peak_in_band() {
        let spec = SyntheticSpec {
            noise_level: 0.0,
            trials_per_class: 5,
            ..SyntheticSpec::default()
        };
        let ts = generate_synthetic(&spec).unwrap();
        let resolution = spec.sample_rate_hz / spec.samples_per_trial() as f64;
        for t in &ts.trials {
            let (lo, hi) = spec.classes[t.label as usize - 1].band();
            for ch in 0..t.channels {
                let f = periodogram_peak_hz(t.channel(ch), spec.sample_rate_hz);
                assert!(f >= lo - resolution && f <= hi + resolution, "class {} peak {f}", t.label);
            }
        }
    }

    #[test]
    fn deterministic() {
        let spec = SyntheticSpec {
            trials_per_class: 3,
            ..SyntheticSpec::default()
        };
        assert_eq!(generate_synthetic(&spec).unwrap(), generate_synthetic(&spec).unwrap());
    }

    #[test]
    fn pink_noise_is_unit_variance_and_red() {
        let mut rng = seeds::rng(1);
        let x = pink_noise(4096, &mut rng);
        let var = x.iter().map(|v| v * v).sum::<f64>() / 4096.0;
        assert!((var - 1.0).abs() < 1e-9);
        let lag1 = x.windows(2).map(|w| w[0] * w[1]).sum::<f64>() / 4095.0;
        assert!(lag1 > 0.3);
    }

    #[test]
    fn invalid_specs() {
        let mut spec = SyntheticSpec::default();
        spec.classes[2].center_hz = 124.0;
        assert!(generate_synthetic(&spec).is_err());
        let spec = SyntheticSpec {
            classes: vec![],
            ..SyntheticSpec::default()
        };
        assert!(spec.validate().is_err());
    }
}
