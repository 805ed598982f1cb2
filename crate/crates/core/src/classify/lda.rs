use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_row, check_training_set, class_index, dot, fit_standardizer, ClassifyError, StandardizationStats};
use crate::dataset::{ClassId, NUM_CLASSES};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaParams {
    /// Ridge added to the pooled covariance, as a multiple of `trace / d`.
    pub shrinkage: f64,
    pub standardize: bool,
}

impl Default for LdaParams {
    fn default() -> Self {
        LdaParams {
            shrinkage: 1e-3,
            standardize: true,
        }
    }
}

/// Linear discriminants `delta_c(x) = w_c . x + b_c` of a shared-covariance
/// Gaussian model. Classes absent from training get no discriminant and are
/// never predicted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub stats: Option<StandardizationStats>,
    pub means: Vec<Option<Vec<f64>>>,
    pub priors: Vec<f64>,
    pub weights: Vec<Option<Vec<f64>>>,
    pub offsets: Vec<f64>,
    /// Absolute ridge actually used.
    pub ridge: f64,
    pub dim: usize,
}

/// `(U^T U / m + s I)^{-1} B` without forming the `d x d` matrix when `n < d`.
fn solve_regularized(u: &DMatrix<f64>, m: f64, s: f64, b: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let (n, d) = u.shape();
    if n < d {
        // Woodbury: (sI + U^T U/m)^{-1} = (1/s)(I - U^T (s m I + U U^T)^{-1} U)
        let mut inner = u * u.transpose();
        for i in 0..n {
            inner[(i, i)] += s * m;
        }
        let chol = inner.cholesky()?;
        let ub = u * b;
        let corr = u.transpose() * chol.solve(&ub);
        Some((b - corr) / s)
    } else {
        let mut cov = u.transpose() * u / m;
        for i in 0..d {
            cov[(i, i)] += s;
        }
        Some(cov.cholesky()?.solve(b))
    }
}

pub fn train_lda(x: &[Vec<f64>], y: &[ClassId], params: &LdaParams) -> Result<LdaModel, ClassifyError> {
    let d = check_training_set(x, y)?;
    if !(params.shrinkage >= 0.0 && params.shrinkage.is_finite()) {
        return Err(ClassifyError::InvalidParameter(format!("shrinkage = {}", params.shrinkage)));
    }
    let (stats, xs) = if params.standardize {
        let s = fit_standardizer(x)?;
        let xs = s.apply(x)?;
        (Some(s), xs)
    } else {
        (None, x.to_vec())
    };
    let n = xs.len();
    let mut counts = [0usize; NUM_CLASSES];
    let mut sums = vec![vec![0.0; d]; NUM_CLASSES];
    for (row, &l) in xs.iter().zip(y) {
        let c = class_index(l)?;
        counts[c] += 1;
        for (s, v) in sums[c].iter_mut().zip(row) {
            *s += v;
        }
    }
    let present = counts.iter().filter(|&&c| c > 0).count();
    if present < 2 {
        return Err(ClassifyError::TooFewRows {
            required: 2,
            found: present,
        });
    }
    let means: Vec<Option<Vec<f64>>> = (0..NUM_CLASSES)
        .map(|c| (counts[c] > 0).then(|| sums[c].iter().map(|s| s / counts[c] as f64).collect()))
        .collect();
    let priors: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();

    let mut u = DMatrix::zeros(n, d);
    for (i, (row, &l)) in xs.iter().zip(y).enumerate() {
        let mu = means[class_index(l)?].as_ref().unwrap();
        for j in 0..d {
            u[(i, j)] = row[j] - mu[j];
        }
    }
    let m = (n.saturating_sub(present)).max(1) as f64;
    let trace = u.iter().map(|v| v * v).sum::<f64>() / m;
    let mut ridge = params.shrinkage * trace / d as f64;
    if ridge <= 0.0 {
        ridge = if trace > 0.0 { 1e-12 * trace / d as f64 } else { 1.0 };
    }

    let present_idx: Vec<usize> = (0..NUM_CLASSES).filter(|&c| counts[c] > 0).collect();
    let mut b = DMatrix::zeros(d, present_idx.len());
    for (k, &c) in present_idx.iter().enumerate() {
        b.set_column(k, &DVector::from_column_slice(means[c].as_ref().unwrap()));
    }
    let mut solved = None;
    for attempt in 0..12 {
        if let Some(w) = solve_regularized(&u, m, ridge, &b) {
            solved = Some(w);
            break;
        }
        log::warn!("pooled covariance not positive definite at ridge {ridge:.3e} (attempt {attempt}); escalating");
        ridge *= 10.0;
    }
    let w = solved.ok_or(ClassifyError::SingularCovariance)?;

    let mut weights = vec![None; NUM_CLASSES];
    let mut offsets = vec![f64::NEG_INFINITY; NUM_CLASSES];
    for (k, &c) in present_idx.iter().enumerate() {
        let wc: Vec<f64> = w.column(k).iter().copied().collect();
        offsets[c] = -0.5 * dot(&wc, means[c].as_ref().unwrap()) + priors[c].ln();
        weights[c] = Some(wc);
    }
    Ok(LdaModel {
        stats,
        means,
        priors,
        weights,
        offsets,
        ridge,
        dim: d,
    })
}

impl LdaModel {
    /// Discriminant scores; absent classes score `-inf`.
    pub fn scores(&self, x: &[f64]) -> Result<[f64; NUM_CLASSES], ClassifyError> {
        check_row(x, self.dim)?;
        let z = match &self.stats {
            Some(s) => s.apply_row(x)?,
            None => x.to_vec(),
        };
        let mut out = [f64::NEG_INFINITY; NUM_CLASSES];
        for ((o, w), b) in out.iter_mut().zip(&self.weights).zip(&self.offsets) {
            if let Some(w) = w {
                *o = dot(w, &z) + b;
            }
        }
        Ok(out)
    }

    pub fn predict(&self, x: &[f64]) -> Result<(ClassId, [f64; NUM_CLASSES]), ClassifyError> {
        let s = self.scores(x)?;
        Ok((super::ova_argmax(&s), s))
    }
}
