//! Windowed feature extraction.
//!
//! A vector (a flattened weight matrix, or a raw segment in the comparison
//! cases) is cut into `S = floor(len / window_size)` non-overlapping windows;
//! any remainder is dropped. Each window yields `r = p + 2^M + 2` values laid
//! out as
//!
//! ```text
//! [ a_1 .. a_p | SE_0 .. SE_{2^M - 1} | c2 | singularity-spectrum width ]
//! ```
//!
//! and the feature vector is the window-major concatenation of those blocks.

mod burg;
mod entropy;
mod export;
mod multifractal;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use burg::{burg, burg_ar, BurgModel};
pub use entropy::{node_entropy, wp_entropy, PacketEntropy};
pub use export::{load_feature_matrix, save_feature_matrix, write_feature_csv, FeatureSidecar};
pub use multifractal::{
    legendre_spectrum, scaling_exponents, second_cumulant, structure_function,
    structure_function_counted, wavelet_leaders, Leaders, ScaleRange, SingularitySpectrum,
};

use crate::dataset::ClassId;
use crate::wavelets::{dwt, registry_get, WaveletError, WaveletFilter};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureError {
    #[error("window has zero variance")]
    ZeroVariance,
    #[error("window of length {len} is too short for AR order {order}")]
    WindowTooShort { len: usize, order: usize },
    #[error(transparent)]
    Wavelet(#[from] WaveletError),
    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),
    #[error("all leaders are zero at scale {scale}")]
    AllLeadersZero { scale: usize },
    #[error("singularity spectrum has no point with D(h) >= 0")]
    EmptySpectrum,
    #[error("invalid feature configuration: {0}")]
    InvalidConfig(String),
    #[error("window {index}: {source}")]
    Window {
        index: usize,
        #[source]
        source: Box<FeatureError>,
    },
}

pub fn default_q_grid() -> Vec<f64> {
    (-10..=10).map(|i| i as f64 * 0.5).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    pub window_size: usize,
    pub ar_order: usize,
    pub wpd_level: usize,
    pub wpd_wavelet: String,
    pub leaders_wavelet: String,
    /// DWT depth for the leaders; `None` picks `floor(log2 window) - 1`.
    pub leaders_levels: Option<usize>,
    pub q_grid: Vec<f64>,
    /// Regression scales; `None` means `(2, J - 1)`.
    pub scale_range: Option<ScaleRange>,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            window_size: 250,
            ar_order: 6,
            wpd_level: 4,
            wpd_wavelet: "db4".into(),
            leaders_wavelet: "db4".into(),
            leaders_levels: None,
            q_grid: default_q_grid(),
            scale_range: None,
        }
    }
}

impl FeatureConfig {
    /// `r = p + 2^M + 2`.
    pub fn features_per_window(&self) -> usize {
        self.ar_order + (1usize << self.wpd_level) + 2
    }

    pub fn leaders_levels_for(&self, window: usize) -> usize {
        self.leaders_levels
            .unwrap_or_else(|| (window.max(2).ilog2() as usize).saturating_sub(1))
    }

    pub fn scale_range_for(&self, window: usize) -> ScaleRange {
        self.scale_range
            .unwrap_or_else(|| (2, self.leaders_levels_for(window).saturating_sub(1)))
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        let bad = |m: String| Err(FeatureError::InvalidConfig(m));
        if self.window_size == 0 {
            return bad("window_size must be positive".into());
        }
        if self.ar_order == 0 {
            return bad("ar_order must be at least 1".into());
        }
        if self.wpd_level == 0 || self.wpd_level > 16 {
            return bad(format!("wpd_level {} is out of range", self.wpd_level));
        }
        if self.q_grid.len() < 3 {
            return bad("q_grid needs at least 3 points".into());
        }
        registry_get(&self.wpd_wavelet)?;
        registry_get(&self.leaders_wavelet)?;
        Ok(())
    }
}

/// Features of one window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowFeatures {
    pub ar: Vec<f64>,
    pub wp_entropy: Vec<f64>,
    pub c2: f64,
    pub ss_width: f64,
}

impl WindowFeatures {
    pub fn len(&self) -> usize {
        self.ar.len() + self.wp_entropy.len() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn extend_into(&self, out: &mut Vec<f64>) {
        out.extend_from_slice(&self.ar);
        out.extend_from_slice(&self.wp_entropy);
        out.push(self.c2);
        out.push(self.ss_width);
    }
}

/// Window-major concatenation of per-window features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub windows: usize,
    pub per_window: usize,
    pub label: Option<ClassId>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn window(&self, s: usize) -> &[f64] {
        &self.values[s * self.per_window..(s + 1) * self.per_window]
    }

    pub fn with_label(mut self, label: ClassId) -> Self {
        self.label = Some(label);
        self
    }
}

struct Prepared {
    wpd: WaveletFilter,
    leaders: WaveletFilter,
}

fn features_of(window: &[f64], cfg: &FeatureConfig, w: &Prepared) -> Result<WindowFeatures, FeatureError> {
    let ar = burg_ar(window, cfg.ar_order)?;
    let wp = wp_entropy(window, &w.wpd, cfg.wpd_level)?;
    let levels = cfg.leaders_levels_for(window.len());
    let coeffs = dwt(window, &w.leaders, levels)?;
    let leaders = wavelet_leaders(&coeffs);
    let range = cfg.scale_range_for(window.len());
    let c2 = second_cumulant(&leaders, range)?;
    let zeta = scaling_exponents(&leaders, &cfg.q_grid, range)?;
    // Only reachable when the concave hull lifts zeta(0) above 1; treated as
    // a collapsed spectrum.
    let ss_width = match legendre_spectrum(&cfg.q_grid, &zeta) {
        Ok(s) => s.width,
        Err(FeatureError::EmptySpectrum) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(WindowFeatures {
        ar,
        wp_entropy: wp.values,
        c2,
        ss_width,
    })
}

/// Features of a single window (the whole of `window`).
pub fn single_window_features(window: &[f64], cfg: &FeatureConfig) -> Result<WindowFeatures, FeatureError> {
    cfg.validate()?;
    let prepared = Prepared {
        wpd: registry_get(&cfg.wpd_wavelet)?,
        leaders: registry_get(&cfg.leaders_wavelet)?,
    };
    features_of(window, cfg, &prepared)
}

/// Cuts `v` into non-overlapping windows and concatenates their features.
/// Windows are processed in parallel; the output layout does not depend on
/// scheduling.
pub fn window_features(v: &[f64], cfg: &FeatureConfig) -> Result<FeatureVector, FeatureError> {
    cfg.validate()?;
    if v.len() < cfg.window_size {
        return Err(FeatureError::InvalidConfig(format!(
            "vector of length {} is shorter than the window size {}",
            v.len(),
            cfg.window_size
        )));
    }
    let prepared = Prepared {
        wpd: registry_get(&cfg.wpd_wavelet)?,
        leaders: registry_get(&cfg.leaders_wavelet)?,
    };
    let windows = v.len() / cfg.window_size;
    let per_window = cfg.features_per_window();
    let blocks: Vec<WindowFeatures> = v
        .par_chunks_exact(cfg.window_size)
        .enumerate()
        .map(|(index, w)| {
            features_of(w, cfg, &prepared).map_err(|e| FeatureError::Window {
                index,
                source: Box::new(e),
            })
        })
        .collect::<Result<_, _>>()?;
    let mut values = Vec::with_capacity(windows * per_window);
    for b in &blocks {
        b.extend_into(&mut values);
    }
    debug_assert_eq!(values.len(), windows * per_window);
    Ok(FeatureVector {
        values,
        windows,
        per_window,
        label: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = crate::seeds::rng(seed);
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn default_shapes() {
        let cfg = FeatureConfig::default();
        assert_eq!(cfg.features_per_window(), 24);
        let fv = window_features(&noise(37_500, 1), &cfg).unwrap();
        assert_eq!((fv.windows, fv.len()), (150, 3600));

        let fv = window_features(&noise(750, 2), &cfg).unwrap();
        assert_eq!((fv.windows, fv.len()), (3, 72));

        let whole = FeatureConfig {
            window_size: 750,
            ..FeatureConfig::default()
        };
        let fv = window_features(&noise(750, 2), &whole).unwrap();
        assert_eq!((fv.windows, fv.len()), (1, 24));
    }

    #[test]
    fn remainder_is_dropped() {
        let cfg = FeatureConfig::default();
        let v = noise(260, 3);
        let a = window_features(&v, &cfg).unwrap();
        let b = window_features(&v[..250], &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn window_errors_carry_their_index() {
        let cfg = FeatureConfig::default();
        let mut v = noise(750, 4);
        v[250..500].iter_mut().for_each(|x| *x = 0.0);
        match window_features(&v, &cfg) {
            Err(FeatureError::Window { index, source }) => {
                assert_eq!(index, 1);
                assert_eq!(*source, FeatureError::ZeroVariance);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(window_features(&v[..100], &cfg).is_err());
    }

    #[test]
    fn amplitude_scaling_leaves_features_unchanged() {
        let cfg = FeatureConfig::default();
        let v = noise(500, 5);
        let s: Vec<f64> = v.iter().map(|x| x * 42.0).collect();
        let a = window_features(&v, &cfg).unwrap();
        let b = window_features(&s, &cfg).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()), "{x} vs {y}");
        }
    }

    #[test]
    fn sweep_window_sizes_are_supported() {
        let v = noise(37_500, 6);
        for size in [125, 250, 375, 500, 750, 1000, 1250, 1500] {
            let cfg = FeatureConfig {
                window_size: size,
                ..FeatureConfig::default()
            };
            let fv = window_features(&v, &cfg).unwrap();
            assert_eq!(fv.len(), (37_500 / size) * 24, "size {size}");
            assert!(fv.values.iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = FeatureConfig::default();
        cfg.wpd_wavelet = "nope".into();
        assert!(matches!(cfg.validate(), Err(FeatureError::Wavelet(_))));
        let cfg = FeatureConfig {
            ar_order: 0,
            ..FeatureConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
