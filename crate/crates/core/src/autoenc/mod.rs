//! Single-hidden-layer autoencoder trained on one signal, whose encoder
//! weight matrix becomes that signal's representation.
//!
//! The network maps an `L`-sample input through `H` logistic hidden units
//! back to `L` logistic outputs:
//!
//! ```text
//! y = logsig(W_e^T x + b_e)        W_e: L x H
//! z = logsig(W_d^T y + b_d)        W_d: H x L
//! E = sum (x - z)^2 + lambda (|W_e|^2 + |W_d|^2)
//! ```
//!
//! Inputs are min-max scaled to `[0, 1]` before training so they share the
//! output range of the logistic decoder. Biases are not penalized.

mod scg;

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use scg::{scg_minimize, ScgDiagnostics, ScgOptions, Termination};

use crate::seeds;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AutoencError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("signal is constant; min-max scaling is undefined")]
    ConstantSignal,
    #[error("invalid autoencoder configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AutoencoderConfig {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub l2_lambda: f64,
    pub max_epochs: usize,
    pub grad_tol: f64,
    pub cost_tol: f64,
    pub seed: u64,
}

impl Default for AutoencoderConfig {
    fn default() -> Self {
        AutoencoderConfig {
            input_dim: 750,
            hidden_dim: 50,
            l2_lambda: 1e-3,
            max_epochs: 1000,
            grad_tol: 1e-6,
            cost_tol: 1e-9,
            seed: 0,
        }
    }
}

impl AutoencoderConfig {
    pub fn validate(&self) -> Result<(), AutoencError> {
        if self.input_dim == 0 || self.hidden_dim == 0 {
            return Err(AutoencError::InvalidConfig(
                "input and hidden sizes must be positive".into(),
            ));
        }
        if !(self.l2_lambda >= 0.0 && self.l2_lambda.is_finite()) {
            return Err(AutoencError::InvalidConfig(format!(
                "l2_lambda {} must be a non-negative number",
                self.l2_lambda
            )));
        }
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        param_count(self.input_dim, self.hidden_dim)
    }
}

pub fn param_count(input_dim: usize, hidden_dim: usize) -> usize {
    2 * input_dim * hidden_dim + input_dim + hidden_dim
}

#[inline]
fn logsig(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

/// Offsets of the four parameter blocks inside the flat vector
/// `[W_e (row-major L x H), b_e, W_d (row-major H x L), b_d]`.
#[derive(Debug, Clone, Copy)]
struct Layout {
    l: usize,
    h: usize,
}

impl Layout {
    fn we(&self) -> std::ops::Range<usize> {
        0..self.l * self.h
    }
    fn be(&self) -> std::ops::Range<usize> {
        let s = self.l * self.h;
        s..s + self.h
    }
    fn wd(&self) -> std::ops::Range<usize> {
        let s = self.l * self.h + self.h;
        s..s + self.h * self.l
    }
    fn bd(&self) -> std::ops::Range<usize> {
        let s = 2 * self.l * self.h + self.h;
        s..s + self.l
    }
}

fn encode_raw(we: &[f64], be: &[f64], x: &[f64], y: &mut [f64]) {
    let h = be.len();
    y.copy_from_slice(be);
    for (i, &xi) in x.iter().enumerate() {
        let row = &we[i * h..(i + 1) * h];
        for (acc, &w) in y.iter_mut().zip(row) {
            *acc += w * xi;
        }
    }
    y.iter_mut().for_each(|v| *v = logsig(*v));
}

fn decode_raw(wd: &[f64], bd: &[f64], y: &[f64], z: &mut [f64]) {
    let l = bd.len();
    z.copy_from_slice(bd);
    for (k, &yk) in y.iter().enumerate() {
        let row = &wd[k * l..(k + 1) * l];
        for (acc, &w) in z.iter_mut().zip(row) {
            *acc += w * yk;
        }
    }
    z.iter_mut().for_each(|v| *v = logsig(*v));
}

/// Reusable buffers for [`cost_and_gradient_into`].
#[derive(Debug, Clone)]
pub struct Workspace {
    y: Vec<f64>,
    z: Vec<f64>,
    dz: Vec<f64>,
    dy: Vec<f64>,
}

impl Workspace {
    pub fn new(input_dim: usize, hidden_dim: usize) -> Self {
        Workspace {
            y: vec![0.0; hidden_dim],
            z: vec![0.0; input_dim],
            dz: vec![0.0; input_dim],
            dy: vec![0.0; hidden_dim],
        }
    }
}

/// Cost and backpropagated gradient for the flat parameter vector `theta`.
pub fn cost_and_gradient(
    theta: &[f64],
    x: &[f64],
    hidden_dim: usize,
    lambda: f64,
) -> Result<(f64, Vec<f64>), AutoencError> {
    let l = x.len();
    let expected = param_count(l, hidden_dim);
    if theta.len() != expected {
        return Err(AutoencError::DimensionMismatch {
            expected,
            found: theta.len(),
        });
    }
    if let Some(i) = theta.iter().position(|v| !v.is_finite()) {
        return Err(AutoencError::NonFinite(format!("theta[{i}]")));
    }
    let mut grad = vec![0.0; expected];
    let mut ws = Workspace::new(l, hidden_dim);
    let cost = cost_and_gradient_into(theta, x, hidden_dim, lambda, &mut grad, &mut ws);
    Ok((cost, grad))
}

/// Unchecked inner loop of [`cost_and_gradient`].
pub fn cost_and_gradient_into(
    theta: &[f64],
    x: &[f64],
    hidden_dim: usize,
    lambda: f64,
    grad: &mut [f64],
    ws: &mut Workspace,
) -> f64 {
    let lay = Layout {
        l: x.len(),
        h: hidden_dim,
    };
    let (l, h) = (lay.l, lay.h);
    let we = &theta[lay.we()];
    let be = &theta[lay.be()];
    let wd = &theta[lay.wd()];
    let bd = &theta[lay.bd()];

    encode_raw(we, be, x, &mut ws.y);
    decode_raw(wd, bd, &ws.y, &mut ws.z);

    let mut recon = 0.0;
    for i in 0..l {
        let e = ws.z[i] - x[i];
        recon += e * e;
        ws.dz[i] = 2.0 * e * ws.z[i] * (1.0 - ws.z[i]);
    }
    let penalty: f64 = we.iter().chain(wd).map(|w| w * w).sum();

    // decoder: dW_d[k, i] = y_k dz_i, db_d = dz, dy_k = sum_i W_d[k, i] dz_i
    let (g_head, g_tail) = grad.split_at_mut(lay.wd().start);
    let g_wd = &mut g_tail[..h * l];
    for k in 0..h {
        let yk = ws.y[k];
        let row = &wd[k * l..(k + 1) * l];
        let grow = &mut g_wd[k * l..(k + 1) * l];
        let mut acc = 0.0;
        for i in 0..l {
            grow[i] = yk * ws.dz[i] + 2.0 * lambda * row[i];
            acc += row[i] * ws.dz[i];
        }
        ws.dy[k] = acc * ws.y[k] * (1.0 - ws.y[k]);
    }
    g_tail[h * l..h * l + l].copy_from_slice(&ws.dz);

    // encoder: dW_e[i, k] = x_i dy_k
    let g_we = &mut g_head[..l * h];
    for i in 0..l {
        let xi = x[i];
        let row = &we[i * h..(i + 1) * h];
        let grow = &mut g_we[i * h..(i + 1) * h];
        for k in 0..h {
            grow[k] = xi * ws.dy[k] + 2.0 * lambda * row[k];
        }
    }
    g_head[l * h..l * h + h].copy_from_slice(&ws.dy);

    recon + lambda * penalty
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedAutoencoder {
    pub input_dim: usize,
    pub hidden_dim: usize,
    /// `L x H`, row-major.
    pub w_e: Vec<f64>,
    pub b_e: Vec<f64>,
    /// `H x L`, row-major.
    pub w_d: Vec<f64>,
    pub b_d: Vec<f64>,
    pub l2_lambda: f64,
    pub seed: u64,
    pub initial_cost: f64,
    pub final_cost: f64,
    pub epochs_run: usize,
    pub converged: bool,
    pub cost_history: Vec<f64>,
    /// `(min, max)` of the raw training signal.
    pub input_scaling: (f64, f64),
}

impl TrainedAutoencoder {
    /// Builds a model directly from parameters, e.g. for inspection.
    pub fn from_parameters(
        input_dim: usize,
        hidden_dim: usize,
        w_e: Vec<f64>,
        b_e: Vec<f64>,
        w_d: Vec<f64>,
        b_d: Vec<f64>,
    ) -> Result<Self, AutoencError> {
        let checks = [
            (w_e.len(), input_dim * hidden_dim),
            (b_e.len(), hidden_dim),
            (w_d.len(), input_dim * hidden_dim),
            (b_d.len(), input_dim),
        ];
        for (found, expected) in checks {
            if found != expected {
                return Err(AutoencError::DimensionMismatch { expected, found });
            }
        }
        Ok(TrainedAutoencoder {
            input_dim,
            hidden_dim,
            w_e,
            b_e,
            w_d,
            b_d,
            l2_lambda: 0.0,
            seed: 0,
            initial_cost: f64::NAN,
            final_cost: f64::NAN,
            epochs_run: 0,
            converged: false,
            cost_history: Vec::new(),
            input_scaling: (0.0, 1.0),
        })
    }

    pub fn encode(&self, x: &[f64]) -> Result<Vec<f64>, AutoencError> {
        if x.len() != self.input_dim {
            return Err(AutoencError::DimensionMismatch {
                expected: self.input_dim,
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(AutoencError::NonFinite("encoder input".into()));
        }
        let mut y = vec![0.0; self.hidden_dim];
        encode_raw(&self.w_e, &self.b_e, x, &mut y);
        Ok(y)
    }

    pub fn decode(&self, y: &[f64]) -> Result<Vec<f64>, AutoencError> {
        if y.len() != self.hidden_dim {
            return Err(AutoencError::DimensionMismatch {
                expected: self.hidden_dim,
                found: y.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(AutoencError::NonFinite("decoder input".into()));
        }
        let mut z = vec![0.0; self.input_dim];
        decode_raw(&self.w_d, &self.b_d, y, &mut z);
        Ok(z)
    }

    /// Maps a raw signal into the model's `[0, 1]` input range.
    pub fn scale_input(&self, raw: &[f64]) -> Vec<f64> {
        let (lo, hi) = self.input_scaling;
        raw.iter().map(|v| (v - lo) / (hi - lo)).collect()
    }

    /// `|x - z|^2 / |x|^2` on the scaled input.
    pub fn relative_reconstruction_error(&self, raw: &[f64]) -> Result<f64, AutoencError> {
        let x = self.scale_input(raw);
        let z = self.decode(&self.encode(&x)?)?;
        let num: f64 = x.iter().zip(&z).map(|(a, b)| (a - b).powi(2)).sum();
        let den: f64 = x.iter().map(|a| a * a).sum();
        Ok(num / den)
    }

    pub fn weight_vector(&self) -> WeightVector {
        weight_vector(self)
    }

    /// Writes `W_e` as raw little-endian `f32` to `path` and a JSON sidecar
    /// (`<path>.json`) with dimensions, seed and final cost.
    pub fn save_weights(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let path = path.as_ref();
        let mut bytes = Vec::with_capacity(self.w_e.len() * 4);
        for &v in &self.w_e {
            bytes.extend_from_slice(&(v as f32).to_le_bytes());
        }
        std::fs::write(path, bytes)?;
        let sidecar = WeightSidecar {
            rows: self.input_dim,
            cols: self.hidden_dim,
            seed: self.seed,
            final_cost: self.final_cost.is_finite().then_some(self.final_cost),
            epochs_run: self.epochs_run,
        };
        let mut side = path.as_os_str().to_owned();
        side.push(".json");
        std::fs::write(side, serde_json::to_string_pretty(&sidecar).expect("sidecar serializes"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSidecar {
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    /// `None` for models that were never trained.
    pub final_cost: Option<f64>,
    pub epochs_run: usize,
}

/// Reads a matrix written by [`TrainedAutoencoder::save_weights`].
pub fn load_weights(path: impl AsRef<Path>) -> std::io::Result<(WeightSidecar, Vec<f64>)> {
    let path = path.as_ref();
    let mut side = path.as_os_str().to_owned();
    side.push(".json");
    let sidecar: WeightSidecar = serde_json::from_str(&std::fs::read_to_string(side)?)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
    let bytes = std::fs::read(path)?;
    if bytes.len() != sidecar.rows * sidecar.cols * 4 {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "weight file size does not match its sidecar",
        ));
    }
    let values = bytes
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64)
        .collect();
    Ok((sidecar, values))
}

/// The flattened encoder weights of one trained autoencoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub values: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
    pub origin: Option<String>,
}

impl WeightVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Row `i` of the `L x H` matrix the vector was flattened from.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }
}

/// Row-major flattening of `W_e`: entry `(i, k)` lands at `i * H + k`.
pub fn weight_vector(ae: &TrainedAutoencoder) -> WeightVector {
    WeightVector {
        values: ae.w_e.clone(),
        rows: ae.input_dim,
        cols: ae.hidden_dim,
        origin: None,
    }
}

/// Seeded uniform initialization in `(-r, r)`, `r = sqrt(6 / (L + H))`.
pub fn initial_parameters(cfg: &AutoencoderConfig) -> Vec<f64> {
    let r = (6.0 / (cfg.input_dim + cfg.hidden_dim) as f64).sqrt();
    let mut rng = seeds::rng(cfg.seed);
    (0..cfg.param_count())
        .map(|_| rng.random_range(-r..r))
        .collect()
}

/// Trains an autoencoder to reconstruct `signal`.
///
/// Hitting `max_epochs` is not an error; it is reported through
/// [`TrainedAutoencoder::converged`].
pub fn train_autoencoder(
    signal: &[f64],
    cfg: &AutoencoderConfig,
) -> Result<TrainedAutoencoder, AutoencError> {
    cfg.validate()?;
    if signal.len() != cfg.input_dim {
        return Err(AutoencError::DimensionMismatch {
            expected: cfg.input_dim,
            found: signal.len(),
        });
    }
    if signal.iter().any(|v| !v.is_finite()) {
        return Err(AutoencError::NonFinite("training signal".into()));
    }
    let lo = signal.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = signal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return Err(AutoencError::ConstantSignal);
    }
    let x: Vec<f64> = signal.iter().map(|v| (v - lo) / (hi - lo)).collect();

    let theta0 = initial_parameters(cfg);
    let hidden = cfg.hidden_dim;
    let lambda = cfg.l2_lambda;
    let mut ws = Workspace::new(cfg.input_dim, hidden);
    let objective = |theta: &[f64], grad: &mut [f64]| {
        cost_and_gradient_into(theta, &x, hidden, lambda, grad, &mut ws)
    };
    let opts = ScgOptions {
        max_epochs: cfg.max_epochs,
        grad_tol: cfg.grad_tol,
        cost_tol: cfg.cost_tol,
        ..ScgOptions::default()
    };
    let (theta, diag) = scg_minimize(objective, &theta0, &opts)?;

    let lay = Layout {
        l: cfg.input_dim,
        h: hidden,
    };
    Ok(TrainedAutoencoder {
        input_dim: cfg.input_dim,
        hidden_dim: hidden,
        w_e: theta[lay.we()].to_vec(),
        b_e: theta[lay.be()].to_vec(),
        w_d: theta[lay.wd()].to_vec(),
        b_d: theta[lay.bd()].to_vec(),
        l2_lambda: lambda,
        seed: cfg.seed,
        initial_cost: diag.cost_history[0],
        final_cost: diag.final_cost,
        epochs_run: diag.epochs,
        converged: diag.converged(),
        cost_history: diag.cost_history,
        input_scaling: (lo, hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn random_vec(n: usize, seed: u64, scale: f64) -> Vec<f64> {
        let mut rng = seeds::rng(seed);
        (0..n).map(|_| rng.random_range(-scale..scale)).collect()
    }

    fn finite_difference(theta: &[f64], x: &[f64], h: usize, lambda: f64) -> Vec<f64> {
        let step = 1e-6;
        let mut t = theta.to_vec();
        (0..theta.len())
            .map(|i| {
                t[i] = theta[i] + step;
                let up = cost_and_gradient(&t, x, h, lambda).unwrap().0;
                t[i] = theta[i] - step;
                let down = cost_and_gradient(&t, x, h, lambda).unwrap().0;
                t[i] = theta[i];
                (up - down) / (2.0 * step)
            })
            .collect()
    }

    // Independent forward pass: explicit transposed products, no shared helpers.
    fn oracle_forward(theta: &[f64], x: &[f64], h: usize) -> (Vec<f64>, Vec<f64>) {
        let l = x.len();
        let we = |i: usize, k: usize| theta[i * h + k];
        let be = |k: usize| theta[l * h + k];
        let wd = |k: usize, i: usize| theta[l * h + h + k * l + i];
        let bd = |i: usize| theta[2 * l * h + h + i];
        let y: Vec<f64> = (0..h)
            .map(|k| {
                let a: f64 = (0..l).map(|i| we(i, k) * x[i]).sum::<f64>() + be(k);
                1.0 / (1.0 + (-a).exp())
            })
            .collect();
        let z: Vec<f64> = (0..l)
            .map(|i| {
                let a: f64 = (0..h).map(|k| wd(k, i) * y[k]).sum::<f64>() + bd(i);
                1.0 / (1.0 + (-a).exp())
            })
            .collect();
        (y, z)
    }

    fn split(theta: &[f64], l: usize, h: usize) -> TrainedAutoencoder {
        let lay = Layout { l, h };
        TrainedAutoencoder::from_parameters(
            l,
            h,
            theta[lay.we()].to_vec(),
            theta[lay.be()].to_vec(),
            theta[lay.wd()].to_vec(),
            theta[lay.bd()].to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn zero_parameters_give_one_half() {
        let ae = split(&vec![0.0; param_count(5, 3)], 5, 3);
        assert!(ae.encode(&[0.3, -2.0, 7.0, 1.0, 0.0]).unwrap().iter().all(|&v| v == 0.5));
        assert!(ae.decode(&[0.1, 0.9, 0.4]).unwrap().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn large_bias_saturates() {
        let (l, h) = (4, 2);
        let mut theta = vec![0.0; param_count(l, h)];
        let lay = Layout { l, h };
        theta[lay.be()].iter_mut().for_each(|b| *b = 50.0);
        let ae = split(&theta, l, h);
        assert!(ae.encode(&[1.0, 2.0, 3.0, 4.0]).unwrap().iter().all(|&v| v > 1.0 - 1e-12));
    }

    #[test]
    fn forward_matches_oracle() {
        let (l, h) = (9, 4);
        let theta = random_vec(param_count(l, h), 31, 1.0);
        let x = random_vec(l, 32, 1.0);
        let ae = split(&theta, l, h);
        let (y_ref, z_ref) = oracle_forward(&theta, &x, h);
        let y = ae.encode(&x).unwrap();
        let z = ae.decode(&y).unwrap();
        for (a, b) in y.iter().zip(&y_ref).chain(z.iter().zip(&z_ref)) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(y.iter().chain(&z).all(|&v| v > 0.0 && v < 1.0));
    }

    #[test]
    fn dimension_errors() {
        let ae = split(&vec![0.0; param_count(5, 3)], 5, 3);
        assert!(matches!(ae.encode(&[1.0; 4]), Err(AutoencError::DimensionMismatch { expected: 5, found: 4 })));
        assert!(matches!(ae.decode(&[1.0; 5]), Err(AutoencError::DimensionMismatch { .. })));
        assert!(cost_and_gradient(&[0.0; 3], &[0.5; 5], 3, 0.0).is_err());
        let mut theta = vec![0.0; param_count(5, 3)];
        theta[2] = f64::NAN;
        assert!(matches!(cost_and_gradient(&theta, &[0.5; 5], 3, 0.0), Err(AutoencError::NonFinite(_))));
    }

    #[test]
    fn cost_vanishes_at_the_logsig_fixed_point() {
        let (c, _) = cost_and_gradient(&vec![0.0; param_count(6, 3)], &[0.5; 6], 3, 1e-3).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for seed in 0..5 {
            let (l, h) = (6, 3);
            let theta = random_vec(param_count(l, h), 100 + seed, 1.0);
            let x = random_vec(l, 200 + seed, 1.0).iter().map(|v| v.abs()).collect::<Vec<_>>();
            let (_, g) = cost_and_gradient(&theta, &x, h, 1e-2).unwrap();
            let fd = finite_difference(&theta, &x, h, 1e-2);
            let num: f64 = g.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let den = g.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
            assert!(num / den < 1e-5, "seed {seed}: {}", num / den);
        }
    }

    #[test]
    fn weight_vector_flattening_order() {
        let ae = TrainedAutoencoder::from_parameters(2, 1, vec![3.0, -4.0], vec![0.0], vec![0.0; 2], vec![0.0; 2]).unwrap();
        let wv = weight_vector(&ae);
        assert_eq!(wv.values, vec![3.0, -4.0]);
        assert_eq!(wv.row(1), &[-4.0]);
    }

    #[test]
    fn constant_signal_is_rejected() {
        let cfg = AutoencoderConfig {
            input_dim: 8,
            hidden_dim: 2,
            ..Default::default()
        };
        assert_eq!(train_autoencoder(&[1.0; 8], &cfg), Err(AutoencError::ConstantSignal));
        assert!(matches!(train_autoencoder(&[1.0; 7], &cfg), Err(AutoencError::DimensionMismatch { .. })));
    }

    #[test]
    fn smooth_signal_trains_well_and_deterministically() {
        let cfg = AutoencoderConfig {
            seed: 5,
            ..Default::default()
        };
        let x: Vec<f64> = (0..750).map(|i| (2.0 * PI * 3.0 * i as f64 / 750.0).sin()).collect();
        let a = train_autoencoder(&x, &cfg).unwrap();
        let b = train_autoencoder(&x, &cfg).unwrap();
        assert_eq!(a.w_e, b.w_e);
        assert!(a.final_cost <= a.initial_cost);
        assert!(a.cost_history.windows(2).all(|w| w[1] <= w[0]));
        let err = a.relative_reconstruction_error(&x).unwrap();
        assert!(err < 1e-3, "relative reconstruction error {err}");
        assert_eq!(a.weight_vector().len(), 37_500);

        // untrained initialization reconstructs worse
        let init = initial_parameters(&cfg);
        let mut untrained = split(&init, 750, 50);
        untrained.input_scaling = a.input_scaling;
        assert!(untrained.relative_reconstruction_error(&x).unwrap() > err);
    }

    #[test]
    fn weights_persist_through_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let ae = TrainedAutoencoder::from_parameters(3, 2, vec![0.5, -0.25, 1.0, 2.0, 0.0, -8.0], vec![0.0; 2], vec![0.0; 6], vec![0.0; 3]).unwrap();
        let path = dir.path().join("w.f32");
        ae.save_weights(&path).unwrap();
        let (side, values) = load_weights(&path).unwrap();
        assert_eq!((side.rows, side.cols), (3, 2));
        assert_eq!(values, ae.w_e);
        assert_eq!(side.final_cost, None);
    }
}
