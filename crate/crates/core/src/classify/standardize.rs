use serde::{Deserialize, Serialize};

use super::{check_row, ClassifyError};

/// Column means and population standard deviations of a training matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationStats {
    pub mean: Vec<f64>,
    /// Zero marks a constant column, which maps to zero.
    pub std: Vec<f64>,
}

/// Fits column-wise z-score statistics. Needs at least two rows.
pub fn fit_standardizer(x: &[Vec<f64>]) -> Result<StandardizationStats, ClassifyError> {
    if x.is_empty() {
        return Err(ClassifyError::EmptyInput);
    }
    if x.len() < 2 {
        return Err(ClassifyError::TooFewRows {
            required: 2,
            found: x.len(),
        });
    }
    let d = x[0].len();
    for row in x {
        check_row(row, d)?;
    }
    let n = x.len() as f64;
    let mut mean = vec![0.0; d];
    for row in x {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; d];
    for row in x {
        for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    let std = var
        .iter()
        .zip(&mean)
        .map(|(s, m)| {
            let sd = (s / n).sqrt();
            if sd <= 1e-12 * m.abs().max(f64::MIN_POSITIVE) {
                0.0
            } else {
                sd
            }
        })
        .collect();
    Ok(StandardizationStats { mean, std })
}

impl StandardizationStats {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>, ClassifyError> {
        check_row(row, self.dim())?;
        Ok(row
            .iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| if *s == 0.0 { 0.0 } else { (v - m) / s })
            .collect())
    }

    pub fn apply(&self, x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, ClassifyError> {
        x.iter().map(|r| self.apply_row(r)).collect()
    }
}
