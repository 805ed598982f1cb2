//! End-to-end orchestration: data, preprocessing, segmentation, holdout,
//! per-sample representation, windowed features, classification and reports.
//!
//! Three case modes share every stage except the representation:
//!
//! | case | features computed over                                   |
//! |------|----------------------------------------------------------|
//! | 1    | the whole raw segment as one window                      |
//! | 2    | non-overlapping windows of the raw segment               |
//! | 3    | non-overlapping windows of the autoencoder weight vector |

mod preprocess;
mod report;
mod run;
mod synthetic;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use preprocess::{preprocess, preprocess_with, DENOISE_LEVELS, DENOISE_WAVELET};
pub use report::{
    emit_report, load_report, AutoencoderSummary, CaseResult, DatasetSummary, ExperimentReport, HiddenSweepRow, PartitionSummary,
    Timing, WindowSweepRow, LITERATURE_ROWS,
};
pub use run::{
    majority_vote, prepare, representations, run_case, run_experiment, sweep_hidden, sweep_window, ExperimentPlan,
    Prepared, Representations,
};
pub use synthetic::{generate_synthetic, pink_noise, ClassProfile, SpecError, SyntheticSpec};

use crate::autoenc::AutoencoderConfig;
use crate::classify::ClassifierConfig;
use crate::features::FeatureConfig;
use crate::{Error, Result};

/// Environment variable that overrides [`RunConfig::output_dir`].
pub const OUTPUT_DIR_ENV: &str = "WSPACE_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum DataSource {
    Manifest { path: PathBuf },
    Synthetic(SyntheticSpec),
}

impl Default for DataSource {
    fn default() -> Self {
        DataSource::Synthetic(SyntheticSpec::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseMode {
    Case1,
    Case2,
    Case3,
}

impl CaseMode {
    pub const ALL: [CaseMode; 3] = [CaseMode::Case1, CaseMode::Case2, CaseMode::Case3];

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(CaseMode::Case1),
            2 => Some(CaseMode::Case2),
            3 => Some(CaseMode::Case3),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn label(self) -> &'static str {
        match self {
            CaseMode::Case1 => "Case-1",
            CaseMode::Case2 => "Case-2",
            CaseMode::Case3 => "Case-3",
        }
    }
}

/// Everything a run depends on. Serialized into every report.
///
/// `autoencoder.seed` is not used by the pipeline: each sample's seed is
/// derived from `seed` and the sample index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: DataSource,
    pub preprocess: bool,
    pub segment_start_s: f64,
    pub segment_end_s: f64,
    pub autoencoder: AutoencoderConfig,
    pub features: FeatureConfig,
    pub classifier: ClassifierConfig,
    pub holdout_p: f64,
    pub seed: u64,
    pub case: CaseMode,
    /// Read from config files but left out of reports, so that identical
    /// runs written to different places produce identical reports.
    #[serde(skip_serializing)]
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data: DataSource::default(),
            preprocess: true,
            segment_start_s: 4.0,
            segment_end_s: 7.0,
            autoencoder: AutoencoderConfig::default(),
            features: FeatureConfig::default(),
            classifier: ClassifierConfig::default(),
            holdout_p: 0.3,
            seed: 7,
            case: CaseMode::Case3,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Applies the output-directory environment override, if set.
    pub fn with_env_overrides(mut self) -> Self {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            if !dir.is_empty() {
                self.output_dir = PathBuf::from(dir);
            }
        }
        self
    }

    /// Checks everything that can be checked before any data is touched.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.holdout_p > 0.0 && self.holdout_p < 1.0) {
            return bad(format!("holdout_p {} must lie in (0, 1)", self.holdout_p));
        }
        if !(self.segment_start_s >= 0.0) || !(self.segment_end_s > self.segment_start_s) {
            return bad(format!(
                "segment window [{}, {}) s is empty or negative",
                self.segment_start_s, self.segment_end_s
            ));
        }
        if let DataSource::Synthetic(spec) = &self.data {
            spec.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        self.autoencoder
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.features.validate().map_err(|e| Error::Config(e.to_string()))?;
        match &self.classifier {
            ClassifierConfig::Svm(p) => {
                if !(p.c > 0.0) || !(p.tol > 0.0) {
                    return bad("SVM C and tol must be positive".into());
                }
            }
            ClassifierConfig::Lda(p) => {
                if !(p.shrinkage >= 0.0) {
                    return bad("LDA shrinkage must be non-negative".into());
                }
            }
        }
        Ok(())
    }

    /// Segment length in samples at `sample_rate_hz`, or a config error if the
    /// window does not cover a whole number of samples.
    pub fn segment_length(&self, sample_rate_hz: f64) -> Result<usize> {
        let exact = (self.segment_end_s - self.segment_start_s) * sample_rate_hz;
        let n = exact.round();
        if (exact - n).abs() > 1e-6 || n < 1.0 {
            return Err(Error::Config(format!(
                "segment window of {} s is not a whole number of samples at {sample_rate_hz} Hz",
                self.segment_end_s - self.segment_start_s
            )));
        }
        Ok(n as usize)
    }

    /// Feature settings used for `case`: case 1 treats the segment as one window.
    pub fn features_for(&self, case: CaseMode, segment_len: usize) -> FeatureConfig {
        match case {
            CaseMode::Case1 => FeatureConfig {
                window_size: segment_len,
                ..self.features.clone()
            },
            _ => self.features.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert!(!json.contains("output_dir"));
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(cfg.segment_length(250.0).unwrap(), 750);
    }

    #[test]
    fn partial_json_uses_defaults() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"case": "case1", "output_dir": "x", "classifier": {"kind": "lda"}}"#).unwrap();
        assert_eq!(cfg.case, CaseMode::Case1);
        assert_eq!(cfg.output_dir, PathBuf::from("x"));
        assert_eq!(cfg.classifier.name(), "lda");
        assert_eq!(cfg.holdout_p, 0.3);
    }

    #[test]
    fn invalid_configs() {
        let cfg = RunConfig {
            holdout_p: 1.0,
            ..RunConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let cfg = RunConfig {
            segment_end_s: 4.0,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig::default();
        assert!(cfg.segment_length(333.3).is_err());
    }

    #[test]
    fn case_one_uses_whole_segment() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.features_for(CaseMode::Case1, 750).window_size, 750);
        assert_eq!(cfg.features_for(CaseMode::Case2, 750).window_size, 250);
        assert_eq!(CaseMode::from_number(3), Some(CaseMode::Case3));
        assert_eq!(CaseMode::Case2.number(), 2);
    }
}
