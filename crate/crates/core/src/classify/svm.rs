use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_row, check_training_set, class_index, dot, fit_standardizer, ClassifyError, StandardizationStats};
use crate::dataset::{ClassId, NUM_CLASSES};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmParams {
    pub c: f64,
    /// RBF width; `None` means `1 / (d * var(X))` on the (standardized) training matrix.
    pub gamma: Option<f64>,
    /// KKT violation tolerance.
    pub tol: f64,
    pub standardize: bool,
    pub max_iter: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            gamma: None,
            tol: 1e-3,
            standardize: true,
            max_iter: 10_000_000,
        }
    }
}

/// One class-versus-rest machine over the shared support set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySvm {
    /// `alpha_i * y_i` for every row of [`SvmModel::support`].
    pub coef: Vec<f64>,
    pub rho: f64,
    pub iterations: usize,
    /// Final maximal KKT violation `m(alpha) - M(alpha)`.
    pub kkt_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub gamma: f64,
    pub c: f64,
    pub stats: Option<StandardizationStats>,
    /// Union of the support vectors of the four machines, already standardized.
    pub support: Vec<Vec<f64>>,
    pub machines: Vec<BinarySvm>,
}

/// Argmax of the decision values; ties go to the lowest class id.
pub fn ova_argmax(values: &[f64; NUM_CLASSES]) -> ClassId {
    let mut best = 0;
    for k in 1..NUM_CLASSES {
        if values[k] > values[best] {
            best = k;
        }
    }
    best as ClassId + 1
}

fn rbf(gamma: f64, a: &[f64], b: &[f64]) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

fn kernel_matrix(x: &[Vec<f64>], gamma: f64) -> Vec<Vec<f64>> {
    let norms: Vec<f64> = x.iter().map(|r| dot(r, r)).collect();
    (0..x.len())
        .into_par_iter()
        .map(|i| {
            (0..x.len())
                .map(|j| {
                    if i == j {
                        1.0
                    } else {
                        let d2 = (norms[i] + norms[j] - 2.0 * dot(&x[i], &x[j])).max(0.0);
                        (-gamma * d2).exp()
                    }
                })
                .collect()
        })
        .collect()
}

struct Solution {
    alpha: Vec<f64>,
    rho: f64,
    iterations: usize,
    gap: f64,
}

/// Soft-margin dual solved by SMO with second-order working-set selection.
fn smo(k: &[Vec<f64>], y: &[f64], c: f64, tol: f64, max_iter: usize) -> Solution {
    const TAU: f64 = 1e-12;
    let n = y.len();
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);

    let mut iterations = 0;
    let mut gap;
    loop {
        let mut gmax = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for t in 0..n {
            if up(alpha[t], y[t]) && -y[t] * grad[t] >= gmax {
                gmax = -y[t] * grad[t];
                i = t;
            }
        }
        let mut gmin = f64::INFINITY;
        let mut j = usize::MAX;
        let mut obj_min = f64::INFINITY;
        for t in 0..n {
            if !low(alpha[t], y[t]) {
                continue;
            }
            let v = -y[t] * grad[t];
            gmin = gmin.min(v);
            if i != usize::MAX && v < gmax {
                let b = gmax - v;
                let mut a = k[i][i] + k[t][t] - 2.0 * k[i][t];
                if a <= 0.0 {
                    a = TAU;
                }
                let obj = -b * b / a;
                if obj <= obj_min {
                    obj_min = obj;
                    j = t;
                }
            }
        }
        gap = gmax - gmin;
        if i == usize::MAX || j == usize::MAX || gap < tol || iterations >= max_iter {
            break;
        }
        iterations += 1;

        let (yi, yj) = (y[i], y[j]);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let mut quad = k[i][i] + k[j][j] - 2.0 * k[i][j];
        if quad <= 0.0 {
            quad = TAU;
        }
        if yi != yj {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 && alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = diff;
            } else if diff <= 0.0 && alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 && alpha[i] > c {
                alpha[i] = c;
                alpha[j] = c - diff;
            } else if diff <= 0.0 && alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c && alpha[i] > c {
                alpha[i] = c;
                alpha[j] = sum - c;
            } else if sum <= c && alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c && alpha[j] > c {
                alpha[j] = c;
                alpha[i] = sum - c;
            } else if sum <= c && alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (yi * k[t][i] * di + yj * k[t][j] * dj);
        }
    }
    if iterations >= max_iter {
        log::warn!("SMO stopped at the iteration cap with KKT gap {gap:.3e}");
    }

    // rho from free vectors, else the midpoint of the feasible interval
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut sum_free = 0.0;
    let mut n_free = 0usize;
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 {
        sum_free / n_free as f64
    } else {
        (ub + lb) / 2.0
    };
    Solution {
        alpha,
        rho,
        iterations,
        gap,
    }
}

/// Trains four class-versus-rest RBF machines. When `params.standardize` is
/// set, the standardizer is fitted on `x` and stored in the model.
pub fn train_svm_ova(x: &[Vec<f64>], y: &[ClassId], params: &SvmParams) -> Result<SvmModel, ClassifyError> {
    let d = check_training_set(x, y)?;
    if !(params.c > 0.0 && params.c.is_finite()) || !(params.tol > 0.0) {
        return Err(ClassifyError::InvalidParameter(format!(
            "C = {} and tol = {} must be positive",
            params.c, params.tol
        )));
    }
    for class in 1..=NUM_CLASSES as ClassId {
        if !y.contains(&class) {
            return Err(ClassifyError::MissingClass(class));
        }
    }
    let (stats, xs) = if params.standardize {
        let s = fit_standardizer(x)?;
        let xs = s.apply(x)?;
        (Some(s), xs)
    } else {
        (None, x.to_vec())
    };
    let gamma = match params.gamma {
        Some(g) if g > 0.0 && g.is_finite() => g,
        Some(g) => return Err(ClassifyError::InvalidParameter(format!("gamma = {g}"))),
        None => {
            let count = (xs.len() * d) as f64;
            let mean = xs.iter().flatten().sum::<f64>() / count;
            let var = xs.iter().flatten().map(|v| (v - mean).powi(2)).sum::<f64>() / count;
            if var > 0.0 {
                1.0 / (d as f64 * var)
            } else {
                1.0 / d as f64
            }
        }
    };
    let k = kernel_matrix(&xs, gamma);
    let solutions: Vec<Solution> = (0..NUM_CLASSES)
        .into_par_iter()
        .map(|c| {
            let yb: Vec<f64> = y
                .iter()
                .map(|&l| if class_index(l).unwrap() == c { 1.0 } else { -1.0 })
                .collect();
            smo(&k, &yb, params.c, params.tol, params.max_iter)
        })
        .collect();

    let keep: Vec<usize> = (0..xs.len())
        .filter(|&i| solutions.iter().any(|s| s.alpha[i] > 0.0))
        .collect();
    let machines = solutions
        .iter()
        .enumerate()
        .map(|(c, s)| BinarySvm {
            coef: keep
                .iter()
                .map(|&i| {
                    let yi = if class_index(y[i]).unwrap() == c { 1.0 } else { -1.0 };
                    s.alpha[i] * yi
                })
                .collect(),
            rho: s.rho,
            iterations: s.iterations,
            kkt_gap: s.gap,
        })
        .collect();
    Ok(SvmModel {
        gamma,
        c: params.c,
        stats,
        support: keep.iter().map(|&i| xs[i].clone()).collect(),
        machines,
    })
}

impl SvmModel {
    pub fn dim(&self) -> usize {
        match &self.stats {
            Some(s) => s.dim(),
            None => self.support.first().map_or(0, Vec::len),
        }
    }

    /// The four decision values `f_c(x) = sum_i coef_i K(sv_i, x) - rho_c`.
    pub fn decision_values(&self, x: &[f64]) -> Result<[f64; NUM_CLASSES], ClassifyError> {
        check_row(x, self.dim())?;
        let z = match &self.stats {
            Some(s) => s.apply_row(x)?,
            None => x.to_vec(),
        };
        let kv: Vec<f64> = self.support.iter().map(|sv| rbf(self.gamma, sv, &z)).collect();
        let mut out = [0.0; NUM_CLASSES];
        for (o, m) in out.iter_mut().zip(&self.machines) {
            *o = dot(&m.coef, &kv) - m.rho;
        }
        Ok(out)
    }

    pub fn predict(&self, x: &[f64]) -> Result<(ClassId, [f64; NUM_CLASSES]), ClassifyError> {
        let v = self.decision_values(x)?;
        Ok((ova_argmax(&v), v))
    }
}
