//! Feature-matrix export: one CSV row per sample, or a raw little-endian
//! `f32` matrix with a JSON sidecar.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::FeatureVector;
use crate::dataset::ClassId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSidecar {
    pub samples: usize,
    pub windows: usize,
    pub per_window: usize,
    /// Always `"window-major"`.
    pub layout: String,
    pub labels: Vec<Option<ClassId>>,
}

fn invalid(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

fn common_shape(rows: &[FeatureVector]) -> io::Result<(usize, usize)> {
    let first = rows.first().ok_or_else(|| invalid("no feature vectors"))?;
    let shape = (first.windows, first.per_window);
    if rows
        .iter()
        .any(|r| (r.windows, r.per_window) != shape || r.values.len() != shape.0 * shape.1)
    {
        return Err(invalid("feature vectors differ in shape"));
    }
    Ok(shape)
}

/// Writes `label,f_0,..` rows with a header; unlabeled rows get an empty label.
pub fn write_feature_csv(path: impl AsRef<Path>, rows: &[FeatureVector]) -> io::Result<()> {
    let (windows, per_window) = common_shape(rows)?;
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["label".to_string()];
    header.extend((0..windows * per_window).map(|i| format!("f{i}")));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.label.map(|l| l.to_string()).unwrap_or_default()];
        rec.extend(r.values.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()
}

/// Writes the samples x features matrix as raw `f32` to `path` and its
/// sidecar to `<path>.json`.
pub fn save_feature_matrix(path: impl AsRef<Path>, rows: &[FeatureVector]) -> io::Result<()> {
    let path = path.as_ref();
    let (windows, per_window) = common_shape(rows)?;
    let mut bytes = Vec::with_capacity(rows.len() * windows * per_window * 4);
    for v in rows.iter().flat_map(|r| &r.values) {
        bytes.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    let sidecar = FeatureSidecar {
        samples: rows.len(),
        windows,
        per_window,
        layout: "window-major".into(),
        labels: rows.iter().map(|r| r.label).collect(),
    };
    let mut side = path.as_os_str().to_owned();
    side.push(".json");
    std::fs::write(side, serde_json::to_string_pretty(&sidecar).expect("sidecar serializes"))
}

/// Reads a matrix written by [`save_feature_matrix`].
pub fn load_feature_matrix(path: impl AsRef<Path>) -> io::Result<Vec<FeatureVector>> {
    let path = path.as_ref();
    let mut side = path.as_os_str().to_owned();
    side.push(".json");
    let sc: FeatureSidecar = serde_json::from_str(&std::fs::read_to_string(side)?).map_err(invalid_json)?;
    let cols = sc.windows * sc.per_window;
    let bytes = std::fs::read(path)?;
    if bytes.len() != sc.samples * cols * 4 || sc.labels.len() != sc.samples {
        return Err(invalid("feature file size does not match its sidecar"));
    }
    let values: Vec<f64> = bytes
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64)
        .collect();
    Ok(values
        .chunks(cols.max(1))
        .zip(&sc.labels)
        .map(|(v, &label)| FeatureVector {
            values: v.to_vec(),
            windows: sc.windows,
            per_window: sc.per_window,
            label,
        })
        .collect())
}

fn invalid_json(e: serde_json::Error) -> io::Error {
    invalid(e.to_string())
}
