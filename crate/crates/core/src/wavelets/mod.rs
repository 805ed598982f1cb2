//! Orthogonal wavelet filters and the transforms built on them.
//!
//! All transforms use periodic extension. A band of odd length is first
//! padded by repeating its last sample, so every level halves with rounding
//! up and inverse transforms truncate back to the recorded length.

mod cascade;
mod denoise;
mod filters;
mod select;
mod transform;

use thiserror::Error;

pub use cascade::wavelet_function_samples;
pub use denoise::{threshold_denoise, ThresholdRule, UniversalThreshold};
pub use select::{pearson_max_circular, select_wavelet, WaveletScore, WaveletSelection};
pub use transform::{dwt, idwt, wpd, DwtCoeffs, WpdTree};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveletError {
    #[error("unknown wavelet '{0}'")]
    UnknownWavelet(String),
    #[error("signal of length {len} is too short, at least {required} samples are required")]
    SignalTooShort { len: usize, required: usize },
    #[error("invalid decomposition level {0}")]
    InvalidLevel(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A two-channel orthonormal filter bank.
///
/// `rec_lo` is the scaling filter `h`; the other three filters follow from it:
/// `rec_hi[k] = (-1)^k h[L-1-k]` and the decomposition pair is the time
/// reverse of the reconstruction pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilter {
    pub name: String,
    pub dec_lo: Vec<f64>,
    pub dec_hi: Vec<f64>,
    pub rec_lo: Vec<f64>,
    pub rec_hi: Vec<f64>,
}

impl WaveletFilter {
    pub fn from_scaling(name: impl Into<String>, h: &[f64]) -> Self {
        let len = h.len();
        let rec_lo = h.to_vec();
        let rec_hi: Vec<f64> = (0..len)
            .map(|k| if k % 2 == 0 { h[len - 1 - k] } else { -h[len - 1 - k] })
            .collect();
        let dec_lo = rec_lo.iter().rev().copied().collect();
        let dec_hi = rec_hi.iter().rev().copied().collect();
        WaveletFilter {
            name: name.into(),
            dec_lo,
            dec_hi,
            rec_lo,
            rec_hi,
        }
    }

    pub fn len(&self) -> usize {
        self.rec_lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rec_lo.is_empty()
    }
}

/// Names of every registered wavelet, in registry order.
pub fn registry_names() -> Vec<&'static str> {
    filters::TABLE.iter().map(|(n, _)| *n).collect()
}

/// Looks a wavelet up by its lowercase name (`"haar"`, `"db4"`, `"sym8"`,
/// `"coif3"`, `"fk14"`, ...). `"db1"` is accepted as an alias of Haar.
pub fn registry_get(name: &str) -> Result<WaveletFilter, WaveletError> {
    let key = name.trim().to_ascii_lowercase();
    let key = if key == "db1" { "haar".to_string() } else { key };
    filters::TABLE
        .iter()
        .find(|(n, _)| *n == key)
        .map(|(n, h)| WaveletFilter::from_scaling(*n, h))
        .ok_or_else(|| WaveletError::UnknownWavelet(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    #[test]
    fn thirty_registered_names() {
        let names = registry_names();
        assert_eq!(names.len(), 30);
        for n in ["haar", "db2", "db12", "sym2", "sym8", "coif1", "coif5", "fk4", "fk6", "fk8", "fk14", "fk18", "fk22"] {
            assert!(names.contains(&n), "{n}");
        }
    }

    #[test]
    fn haar_is_the_unit_average() {
        let w = registry_get("haar").unwrap();
        assert_eq!(w.dec_lo, vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        assert_eq!(registry_get("DB1").unwrap().rec_lo, w.rec_lo);
    }

    #[test]
    fn db4_matches_published_values() {
        // Daubechies (1992), Table 6.1, N = 4, renormalized to sum sqrt(2).
        let published = [
            0.230_377_813_308_896_5,
            0.714_846_570_552_915_4,
            0.630_880_767_929_858_9,
            -0.027_983_769_416_859_85,
            -0.187_034_811_719_093_1,
            0.030_841_381_835_560_76,
            0.032_883_011_666_885_2,
            -0.010_597_401_785_069_03,
        ];
        let w = registry_get("db4").unwrap();
        assert_eq!(w.len(), 8);
        for (a, b) in w.rec_lo.iter().zip(published) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!((w.dec_lo.iter().sum::<f64>() - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn unknown_name() {
        assert_eq!(
            registry_get("db99"),
            Err(WaveletError::UnknownWavelet("db99".into()))
        );
    }

    #[test]
    fn every_filter_is_orthonormal() {
        for name in registry_names() {
            let w = registry_get(name).unwrap();
            let g = &w.dec_lo;
            let h = &w.dec_hi;
            assert_eq!(g.len() % 2, 0, "{name}");
            assert!((g.iter().sum::<f64>() - SQRT_2).abs() < 1e-10, "{name}");
            assert!((g.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-10, "{name}");
            for shift in (2..g.len()).step_by(2) {
                let dot: f64 = (0..g.len() - shift).map(|k| g[k] * g[k + shift]).sum();
                assert!(dot.abs() < 1e-10, "{name} shift {shift}");
            }
            // quadrature mirror: h[k] = (-1)^(k+1) g[L-1-k]
            let n = g.len();
            for k in 0..n {
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                assert!((h[k] - sign * g[n - 1 - k]).abs() < 1e-15, "{name}");
            }
        }
    }
}
