//! Scaled conjugate gradient (Møller, 1993).
//!
//! Conjugate directions with a Hessian-free curvature estimate along the
//! search direction and a Levenberg-Marquardt style scale `lambda` in place
//! of a line search. Only steps with a non-negative comparison ratio are
//! accepted, so the accepted cost sequence never increases.

use serde::{Deserialize, Serialize};

use super::AutoencError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScgOptions {
    pub max_epochs: usize,
    /// Stop once the gradient's Euclidean norm falls below this.
    pub grad_tol: f64,
    /// Stop once an accepted step lowers the cost by less than this.
    pub cost_tol: f64,
    /// Finite-difference step scale for the curvature probe.
    pub sigma: f64,
    /// Initial scale parameter.
    pub lambda: f64,
}

impl Default for ScgOptions {
    fn default() -> Self {
        ScgOptions {
            max_epochs: 1000,
            grad_tol: 1e-6,
            cost_tol: 1e-9,
            sigma: 1e-4,
            lambda: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    GradientTolerance,
    CostTolerance,
    MaxEpochs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScgDiagnostics {
    /// Cost at the current point after every epoch; entry 0 is the start.
    pub cost_history: Vec<f64>,
    pub epochs: usize,
    pub final_cost: f64,
    pub gradient_norm: f64,
    pub termination: Termination,
}

impl ScgDiagnostics {
    pub fn converged(&self) -> bool {
        self.termination != Termination::MaxEpochs
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `objective`, which returns the cost at `theta` and writes the
/// gradient into its second argument.
pub fn scg_minimize<F>(
    mut objective: F,
    theta0: &[f64],
    opts: &ScgOptions,
) -> Result<(Vec<f64>, ScgDiagnostics), AutoencError>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = theta0.len();
    let mut eval = |x: &[f64], g: &mut [f64]| -> Result<f64, AutoencError> {
        let c = objective(x, g);
        if !c.is_finite() {
            return Err(AutoencError::NonFinite(format!("cost evaluated to {c}")));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(AutoencError::NonFinite("gradient has non-finite entries".into()));
        }
        Ok(c)
    };

    let mut w = theta0.to_vec();
    let mut grad = vec![0.0; n];
    let mut cost = eval(&w, &mut grad)?;
    let mut history = vec![cost];

    let mut r: Vec<f64> = grad.iter().map(|g| -g).collect();
    let mut p = r.clone();
    let mut lambda = opts.lambda;
    let mut lambda_bar = 0.0;
    let mut success = true;
    let mut delta = 0.0;

    let mut probe = vec![0.0; n];
    let mut probe_grad = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial_grad = vec![0.0; n];
    let mut s = vec![0.0; n];

    let finish = |w: Vec<f64>, history: Vec<f64>, cost: f64, r: &[f64], epochs, termination| {
        let gradient_norm = dot(r, r).sqrt();
        Ok((
            w,
            ScgDiagnostics {
                cost_history: history,
                epochs,
                final_cost: cost,
                gradient_norm,
                termination,
            },
        ))
    };

    if dot(&r, &r).sqrt() <= opts.grad_tol {
        return finish(w, history, cost, &r, 0, Termination::GradientTolerance);
    }

    let mut since_restart = 0usize;
    for epoch in 1..=opts.max_epochs {
        let p_sq = dot(&p, &p);
        if success {
            // second-order information along p
            let sigma = opts.sigma / p_sq.sqrt();
            for i in 0..n {
                probe[i] = w[i] + sigma * p[i];
            }
            eval(&probe, &mut probe_grad)?;
            for i in 0..n {
                s[i] = (probe_grad[i] - grad[i]) / sigma;
            }
            delta = dot(&p, &s);
        }

        // scale and force positive definiteness
        delta += (lambda - lambda_bar) * p_sq;
        if delta <= 0.0 {
            lambda_bar = 2.0 * (lambda - delta / p_sq);
            delta = -delta + lambda * p_sq;
            lambda = lambda_bar;
        }

        let mu = dot(&p, &r);
        let alpha = mu / delta;
        for i in 0..n {
            trial[i] = w[i] + alpha * p[i];
        }
        let trial_cost = eval(&trial, &mut trial_grad)?;
        let comparison = 2.0 * delta * (cost - trial_cost) / (mu * mu);

        let mut stop = None;
        if comparison >= 0.0 && trial_cost <= cost {
            let drop = cost - trial_cost;
            std::mem::swap(&mut w, &mut trial);
            std::mem::swap(&mut grad, &mut trial_grad);
            cost = trial_cost;
            lambda_bar = 0.0;
            success = true;
            since_restart += 1;

            let r_new: Vec<f64> = grad.iter().map(|g| -g).collect();
            if since_restart >= n {
                p.copy_from_slice(&r_new);
                since_restart = 0;
            } else {
                let beta = (dot(&r_new, &r_new) - dot(&r_new, &r)) / mu;
                for i in 0..n {
                    p[i] = r_new[i] + beta * p[i];
                }
            }
            r = r_new;
            if comparison >= 0.75 {
                lambda *= 0.25;
            }
            if dot(&r, &r).sqrt() <= opts.grad_tol {
                stop = Some(Termination::GradientTolerance);
            } else if drop < opts.cost_tol {
                stop = Some(Termination::CostTolerance);
            }
        } else {
            lambda_bar = lambda;
            success = false;
        }
        if comparison < 0.25 {
            lambda += delta * (1.0 - comparison) / p_sq;
        }
        // keep the scale finite on very flat or very curved stretches
        lambda = lambda.clamp(1e-15, 1e100);
        history.push(cost);

        if let Some(t) = stop {
            return finish(w, history, cost, &r, epoch, t);
        }
    }
    finish(w, history, cost, &r, opts.max_epochs, Termination::MaxEpochs)
}
