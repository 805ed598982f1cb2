//! Wavelet-leader multifractal analysis: leaders, structure functions,
//! scaling exponents, the Legendre singularity spectrum and the log-cumulant
//! estimate of `c2`.
//!
//! Scales are numbered `j = 1` (finest) upward. Coefficient `(j, k)` covers
//! the dyadic interval `[k 2^j, (k + 1) 2^j)` in sample units. Leaders are
//! built from the orthonormal DWT coefficients without renormalization.

use crate::wavelets::DwtCoeffs;

use super::FeatureError;

/// Leaders per scale; `scales[j - 1]` holds `d_{j, .}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaders {
    pub scales: Vec<Vec<f64>>,
}

impl Leaders {
    pub fn levels(&self) -> usize {
        self.scales.len()
    }

    pub fn at(&self, j: usize) -> &[f64] {
        &self.scales[j - 1]
    }
}

/// `d_{j,k} = sup |C_{l,h}|` over every `l <= j` whose interval lies inside
/// `3 I_{j,k} = I_{j,k-1} u I_{j,k} u I_{j,k+1}`, truncated at the signal
/// edges.
pub fn wavelet_leaders(c: &DwtCoeffs) -> Leaders {
    // sup over the dyadic subtree rooted at each coefficient
    let mut subtree: Vec<Vec<f64>> = Vec::with_capacity(c.levels());
    for (idx, band) in c.details.iter().enumerate() {
        let row: Vec<f64> = band
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let mut m = v.abs();
                if idx > 0 {
                    let finer = &subtree[idx - 1];
                    for child in [2 * k, 2 * k + 1] {
                        if let Some(&s) = finer.get(child) {
                            m = m.max(s);
                        }
                    }
                }
                m
            })
            .collect();
        subtree.push(row);
    }
    let scales = subtree
        .iter()
        .map(|row| {
            (0..row.len())
                .map(|k| {
                    let lo = k.saturating_sub(1);
                    let hi = (k + 1).min(row.len() - 1);
                    row[lo..=hi].iter().copied().fold(0.0, f64::max)
                })
                .collect()
        })
        .collect();
    Leaders { scales }
}

/// Inclusive scale range `(j_min, j_max)` used for regressions.
pub type ScaleRange = (usize, usize);

fn check_range(leaders: &Leaders, range: ScaleRange) -> Result<(), FeatureError> {
    let (lo, hi) = range;
    if lo < 1 || hi > leaders.levels() || hi < lo + 2 {
        return Err(FeatureError::DegenerateRegression(format!(
            "scale range {lo}..={hi} must hold at least 3 of the {} available scales",
            leaders.levels()
        )));
    }
    Ok(())
}

/// `S(q, 2^j)`: mean of `d^q` over the non-zero leaders at scale `j`, with
/// the number of leaders used.
pub fn structure_function_counted(
    leaders: &Leaders,
    q: f64,
    j: usize,
) -> Result<(f64, usize), FeatureError> {
    if j == 0 || j > leaders.levels() {
        return Err(FeatureError::DegenerateRegression(format!("no scale {j}")));
    }
    let mut sum = 0.0;
    let mut n = 0usize;
    for &d in leaders.at(j) {
        if d > 0.0 {
            sum += if q == 0.0 { 1.0 } else { d.powf(q) };
            n += 1;
        }
    }
    if n == 0 {
        return Err(FeatureError::AllLeadersZero { scale: j });
    }
    Ok((sum / n as f64, n))
}

pub fn structure_function(leaders: &Leaders, q: f64, j: usize) -> Result<f64, FeatureError> {
    structure_function_counted(leaders, q, j).map(|(s, _)| s)
}

/// Slope of the weighted least-squares line through `(x, y)`.
fn weighted_slope(xs: &[f64], ys: &[f64], ws: &[f64]) -> Option<f64> {
    let sw: f64 = ws.iter().sum();
    if xs.len() < 2 || sw <= 0.0 {
        return None;
    }
    let mx = xs.iter().zip(ws).map(|(x, w)| x * w).sum::<f64>() / sw;
    let my = ys.iter().zip(ws).map(|(y, w)| y * w).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for ((x, y), w) in xs.iter().zip(ys).zip(ws) {
        sxx += w * (x - mx) * (x - mx);
        sxy += w * (x - mx) * (y - my);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `zeta(q)` for every `q`: weighted (by `n_j`) regression slope of
/// `log2 S(q, 2^j)` against `j` over `range`.
pub fn scaling_exponents(
    leaders: &Leaders,
    q_grid: &[f64],
    range: ScaleRange,
) -> Result<Vec<f64>, FeatureError> {
    check_range(leaders, range)?;
    q_grid
        .iter()
        .map(|&q| {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut ws = Vec::new();
            for j in range.0..=range.1 {
                match structure_function_counted(leaders, q, j) {
                    Ok((s, n)) => {
                        xs.push(j as f64);
                        ys.push(s.log2());
                        ws.push(n as f64);
                    }
                    Err(FeatureError::AllLeadersZero { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            weighted_slope(&xs, &ys, &ws).ok_or_else(|| {
                FeatureError::DegenerateRegression(format!("fewer than 2 usable scales at q = {q}"))
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularitySpectrum {
    pub h: Vec<f64>,
    pub d: Vec<f64>,
    /// `max h - min h` over points with `D(h) >= 0`.
    pub width: f64,
    /// True when `zeta` was replaced by its concave majorant.
    pub hull_applied: bool,
}

/// Least concave majorant of `(x, y)` evaluated back at `x` (sorted `x`).
fn concave_majorant(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..x.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b if it lies on or below the chord a -> i
            let cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut out = vec![0.0; x.len()];
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        for i in a..=b {
            let t = (x[i] - x[a]) / (x[b] - x[a]);
            out[i] = y[a] + t * (y[b] - y[a]);
        }
    }
    if hull.len() == 1 {
        out[hull[0]] = y[hull[0]];
    }
    out
}

/// Second-order accurate derivative on a possibly non-uniform grid.
fn gradient(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 2 {
        let s = (y[1] - y[0]) / (x[1] - x[0]);
        return vec![s, s];
    }
    let three_point = |i0: usize, at: usize| -> f64 {
        // derivative at x[at] of the parabola through i0, i0+1, i0+2
        let (x0, x1, x2) = (x[i0], x[i0 + 1], x[i0 + 2]);
        let (y0, y1, y2) = (y[i0], y[i0 + 1], y[i0 + 2]);
        let t = x[at];
        y0 * ((t - x1) + (t - x2)) / ((x0 - x1) * (x0 - x2))
            + y1 * ((t - x0) + (t - x2)) / ((x1 - x0) * (x1 - x2))
            + y2 * ((t - x0) + (t - x1)) / ((x2 - x0) * (x2 - x1))
    };
    (0..n)
        .map(|i| {
            if i == 0 {
                three_point(0, 0)
            } else if i == n - 1 {
                three_point(n - 3, n - 1)
            } else {
                three_point(i - 1, i)
            }
        })
        .collect()
}

/// Discrete Legendre transform `D(h) = 1 + q h - zeta(q)` with
/// `h = d zeta / d q`, sampled at every grid point.
pub fn legendre_spectrum(q_grid: &[f64], zeta: &[f64]) -> Result<SingularitySpectrum, FeatureError> {
    if q_grid.len() != zeta.len() || q_grid.len() < 2 {
        return Err(FeatureError::InvalidConfig(
            "q grid and zeta must have equal length of at least 2".into(),
        ));
    }
    let mut order: Vec<usize> = (0..q_grid.len()).collect();
    order.sort_by(|&a, &b| q_grid[a].total_cmp(&q_grid[b]));
    let q: Vec<f64> = order.iter().map(|&i| q_grid[i]).collect();
    let z: Vec<f64> = order.iter().map(|&i| zeta[i]).collect();

    let scale = z.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let concave = z.windows(3).zip(q.windows(3)).all(|(zw, qw)| {
        let s1 = (zw[1] - zw[0]) / (qw[1] - qw[0]);
        let s2 = (zw[2] - zw[1]) / (qw[2] - qw[1]);
        s2 <= s1 + 1e-12 * scale
    });
    let z = if concave { z } else { concave_majorant(&q, &z) };

    let h = gradient(&q, &z);
    let d: Vec<f64> = q
        .iter()
        .zip(&h)
        .zip(&z)
        .map(|((q, h), z)| 1.0 + q * h - z)
        .collect();
    let support: Vec<f64> = h
        .iter()
        .zip(&d)
        .filter(|(_, &dv)| dv >= -1e-12)
        .map(|(&hv, _)| hv)
        .collect();
    if support.is_empty() {
        return Err(FeatureError::EmptySpectrum);
    }
    let hmax = support.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let hmin = support.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SingularitySpectrum {
        h,
        d,
        width: hmax - hmin,
        hull_applied: !concave,
    })
}

/// Log-cumulant `c2`: slope of the per-scale variance of `ln d_{j,.}` against
/// `j ln 2`, weighted by the number of non-zero leaders.
pub fn second_cumulant(leaders: &Leaders, range: ScaleRange) -> Result<f64, FeatureError> {
    check_range(leaders, range)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    for j in range.0..=range.1 {
        let logs: Vec<f64> = leaders.at(j).iter().filter(|&&d| d > 0.0).map(|d| d.ln()).collect();
        if logs.len() < 2 {
            continue;
        }
        let n = logs.len() as f64;
        let mean = logs.iter().sum::<f64>() / n;
        let var = logs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        xs.push(j as f64 * std::f64::consts::LN_2);
        ys.push(var);
        ws.push(n);
    }
    if xs.len() < 2 {
        return Err(FeatureError::DegenerateRegression(
            "fewer than 2 scales with at least 2 non-zero leaders".into(),
        ));
    }
    weighted_slope(&xs, &ys, &ws)
        .ok_or_else(|| FeatureError::DegenerateRegression("singular regression".into()))
}
