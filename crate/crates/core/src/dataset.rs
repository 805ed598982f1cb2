//! Trial sets, the manifest + raw float32 on-disk format, segmentation of the
//! motor-imagery window and stratified holdout partitioning.
//!
//! On disk a dataset is a JSON manifest
//!
//! ```json
//! { "subject_id": "s1", "sample_rate_hz": 250.0,
//!   "class_names": ["left hand", "right hand", "tongue", "foot"],
//!   "trials": [ { "id": "t000", "label": 1, "channels": 3, "samples": 1750,
//!                 "file": "t000.f32" } ] }
//! ```
//!
//! plus one headerless little-endian `f32` file per trial holding the
//! `channels x samples` matrix in row-major order. Trial file paths are
//! resolved relative to the manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seeds;

pub type ClassId = u8;

pub const NUM_CLASSES: usize = 4;

pub const DEFAULT_CLASS_NAMES: [&str; NUM_CLASSES] = ["left hand", "right hand", "tongue", "foot"];

#[derive(Debug, Error)]
pub enum DataError {
    #[error("missing file {0}")]
    MissingFile(PathBuf),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid manifest {path}: {reason}")]
    InvalidManifest { path: PathBuf, reason: String },
    #[error("trial {trial}: expected {expected} values, file holds {found}")]
    ShapeMismatch {
        trial: String,
        expected: usize,
        found: usize,
    },
    #[error("trial {trial}: unknown label {label}")]
    UnknownLabel { trial: String, label: i64 },
    #[error("trial {trial}: non-finite value at flat index {index}")]
    NonFinite { trial: String, index: usize },
    #[error("inconsistent trial set: {0}")]
    Inconsistent(String),
    #[error("segment [{start_s}, {end_s}) s is invalid: {reason}")]
    InvalidSegment {
        start_s: f64,
        end_s: f64,
        reason: String,
    },
    #[error("invalid holdout: {0}")]
    InvalidHoldout(String),
    #[error("class {class} has {count} samples, at least 2 are required")]
    ClassTooSmall { class: ClassId, count: usize },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DataError + '_ {
    move |source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            DataError::MissingFile(path.to_path_buf())
        } else {
            DataError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    }
}

/// One cue-paradigm trial: a `channels x samples` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub id: String,
    pub label: ClassId,
    pub channels: usize,
    pub samples: usize,
    pub data: Vec<f64>,
}

impl Trial {
    pub fn new(id: impl Into<String>, label: ClassId, channels: usize, data: Vec<f64>) -> Self {
        let samples = data.len().checked_div(channels).unwrap_or(0);
        Trial {
            id: id.into(),
            label,
            channels,
            samples,
            data,
        }
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        &self.data[c * self.samples..(c + 1) * self.samples]
    }

    pub fn channel_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.samples;
        &mut self.data[c * n..(c + 1) * n]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialSet {
    pub subject_id: String,
    pub sample_rate_hz: f64,
    pub class_names: Vec<String>,
    pub trials: Vec<Trial>,
}

impl TrialSet {
    /// Checks the set-level invariants: positive rate, four class names,
    /// labels in 1..=4, one shared shape and finite data.
    pub fn validate(&self) -> Result<(), DataError> {
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err(DataError::Inconsistent(format!(
                "sample rate {} is not positive",
                self.sample_rate_hz
            )));
        }
        if self.class_names.len() != NUM_CLASSES {
            return Err(DataError::Inconsistent(format!(
                "expected {NUM_CLASSES} class names, found {}",
                self.class_names.len()
            )));
        }
        let Some(first) = self.trials.first() else {
            return Ok(());
        };
        for t in &self.trials {
            if !(1..=NUM_CLASSES as ClassId).contains(&t.label) {
                return Err(DataError::UnknownLabel {
                    trial: t.id.clone(),
                    label: t.label as i64,
                });
            }
            if t.channels != first.channels || t.samples != first.samples {
                return Err(DataError::Inconsistent(format!(
                    "trial {} is {}x{}, trial {} is {}x{}",
                    t.id, t.channels, t.samples, first.id, first.channels, first.samples
                )));
            }
            if t.data.len() != t.channels * t.samples {
                return Err(DataError::ShapeMismatch {
                    trial: t.id.clone(),
                    expected: t.channels * t.samples,
                    found: t.data.len(),
                });
            }
            if let Some(index) = t.data.iter().position(|v| !v.is_finite()) {
                return Err(DataError::NonFinite {
                    trial: t.id.clone(),
                    index,
                });
            }
        }
        Ok(())
    }

    pub fn channels(&self) -> usize {
        self.trials.first().map_or(0, |t| t.channels)
    }

    pub fn samples_per_trial(&self) -> usize {
        self.trials.first().map_or(0, |t| t.samples)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ManifestTrial {
    pub id: String,
    pub label: i64,
    pub channels: usize,
    pub samples: usize,
    pub file: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub subject_id: String,
    pub sample_rate_hz: f64,
    pub class_names: Vec<String>,
    pub trials: Vec<ManifestTrial>,
}

/// Loads a manifest and every trial file it references.
pub fn load_dataset(manifest_path: impl AsRef<Path>) -> Result<TrialSet, DataError> {
    let manifest_path = manifest_path.as_ref();
    let text = fs::read_to_string(manifest_path).map_err(io_err(manifest_path))?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| DataError::InvalidManifest {
            path: manifest_path.to_path_buf(),
            reason: e.to_string(),
        })?;
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));

    let mut trials = Vec::with_capacity(manifest.trials.len());
    for mt in &manifest.trials {
        if !(1..=NUM_CLASSES as i64).contains(&mt.label) {
            return Err(DataError::UnknownLabel {
                trial: mt.id.clone(),
                label: mt.label,
            });
        }
        let path = base.join(&mt.file);
        let bytes = fs::read(&path).map_err(io_err(&path))?;
        let expected = mt.channels * mt.samples;
        if bytes.len() % 4 != 0 || bytes.len() / 4 != expected {
            return Err(DataError::ShapeMismatch {
                trial: mt.id.clone(),
                expected,
                found: bytes.len() / 4,
            });
        }
        let data: Vec<f64> = bytes
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64)
            .collect();
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(DataError::NonFinite {
                trial: mt.id.clone(),
                index,
            });
        }
        trials.push(Trial {
            id: mt.id.clone(),
            label: mt.label as ClassId,
            channels: mt.channels,
            samples: mt.samples,
            data,
        });
    }

    let ts = TrialSet {
        subject_id: manifest.subject_id,
        sample_rate_hz: manifest.sample_rate_hz,
        class_names: manifest.class_names,
        trials,
    };
    ts.validate()?;
    Ok(ts)
}

/// Writes `ts` as `manifest.json` plus one `.f32` file per trial under `dir`
/// and returns the manifest path. Values are narrowed to `f32`.
pub fn save_dataset(ts: &TrialSet, dir: impl AsRef<Path>) -> Result<PathBuf, DataError> {
    let dir = dir.as_ref();
    ts.validate()?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut entries = Vec::with_capacity(ts.trials.len());
    for t in &ts.trials {
        let file = format!("{}.f32", t.id);
        let path = dir.join(&file);
        let mut bytes = Vec::with_capacity(t.data.len() * 4);
        for &v in &t.data {
            bytes.extend_from_slice(&(v as f32).to_le_bytes());
        }
        fs::write(&path, bytes).map_err(io_err(&path))?;
        entries.push(ManifestTrial {
            id: t.id.clone(),
            label: t.label as i64,
            channels: t.channels,
            samples: t.samples,
            file,
        });
    }
    let manifest = Manifest {
        subject_id: ts.subject_id.clone(),
        sample_rate_hz: ts.sample_rate_hz,
        class_names: ts.class_names.clone(),
        trials: entries,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text).map_err(io_err(&path))?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Origin {
    pub trial_id: String,
    pub channel: usize,
}

impl std::fmt::Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.trial_id, self.channel)
    }
}

/// One labeled single-channel segment, the unit of classification.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub signal: Vec<f64>,
    pub label: ClassId,
    pub origin: Origin,
}

/// Cuts `[start_s, end_s)` out of every channel of every trial.
///
/// Records come out trial-major, channel-minor.
pub fn segment_trials(
    ts: &TrialSet,
    start_s: f64,
    end_s: f64,
) -> Result<Vec<SampleRecord>, DataError> {
    let bad = |reason: String| DataError::InvalidSegment {
        start_s,
        end_s,
        reason,
    };
    if !(end_s > start_s) || start_s < 0.0 {
        return Err(bad("end must exceed start and start must be non-negative".into()));
    }
    let rate = ts.sample_rate_hz;
    let len_f = (end_s - start_s) * rate;
    let start_f = start_s * rate;
    if (len_f - len_f.round()).abs() > 1e-6 || (start_f - start_f.round()).abs() > 1e-6 {
        return Err(bad(format!(
            "window does not fall on whole samples at {rate} Hz"
        )));
    }
    let len = len_f.round() as usize;
    let start = start_f.round() as usize;
    let total = ts.samples_per_trial();
    if start + len > total {
        return Err(bad(format!(
            "needs samples up to {}, trials hold {total}",
            start + len
        )));
    }

    let mut out = Vec::with_capacity(ts.trials.len() * ts.channels());
    for t in &ts.trials {
        for c in 0..t.channels {
            out.push(SampleRecord {
                signal: t.channel(c)[start..start + len].to_vec(),
                label: t.label,
                origin: Origin {
                    trial_id: t.id.clone(),
                    channel: c,
                },
            });
        }
    }
    Ok(out)
}

/// Indices into the sample list the partition was drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub holdout_p: f64,
    pub seed: u64,
}

/// Stratified holdout: within each class, `round(p * n_class)` samples go to
/// the test split. Both index lists are returned sorted.
pub fn holdout_partition(labels: &[ClassId], p: f64, seed: u64) -> Result<Partition, DataError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(DataError::InvalidHoldout(format!("p = {p} is outside (0, 1)")));
    }
    if labels.len() < 4 {
        return Err(DataError::InvalidHoldout(format!(
            "{} samples, at least 4 are required",
            labels.len()
        )));
    }
    let mut classes: Vec<ClassId> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();

    let mut rng = seeds::rng(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in classes {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(i, _)| i)
            .collect();
        if members.len() < 2 {
            return Err(DataError::ClassTooSmall {
                class,
                count: members.len(),
            });
        }
        members.shuffle(&mut rng);
        let n_test = (p * members.len() as f64).round() as usize;
        test.extend_from_slice(&members[..n_test]);
        train.extend_from_slice(&members[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Partition {
        train,
        test,
        holdout_p: p,
        seed,
    })
}
