use std::f64::consts::SQRT_2;

use super::{WaveletError, WaveletFilter};

fn upsample_convolve(v: &[f64], filter: &[f64]) -> Vec<f64> {
    let up_len = 2 * v.len() - 1;
    let mut out = vec![0.0; up_len + filter.len() - 1];
    for (i, &a) in v.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (k, &f) in filter.iter().enumerate() {
            out[2 * i + k] += SQRT_2 * f * a;
        }
    }
    out
}

/// Samples the mother wavelet with the cascade algorithm.
///
/// After `n_iter` refinements the returned vector holds psi on a grid of
/// spacing `2^-n_iter` across its support, scaled to unit energy
/// (`sum v^2 = 1`).
pub fn wavelet_function_samples(w: &WaveletFilter, n_iter: usize) -> Result<Vec<f64>, WaveletError> {
    if n_iter == 0 {
        return Err(WaveletError::InvalidArgument("n_iter must be at least 1".into()));
    }
    let mut psi: Vec<f64> = w.rec_hi.iter().map(|g| SQRT_2 * g).collect();
    for _ in 1..n_iter {
        psi = upsample_convolve(&psi, &w.rec_lo);
    }
    // drop the zero tail that upsampling leaves past the support
    while psi.len() > 1 && psi.last() == Some(&0.0) {
        psi.pop();
    }
    let norm = psi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        psi.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::super::{registry_get, registry_names};
    use super::*;

    #[test]
    fn haar_is_a_step() {
        let w = registry_get("haar").unwrap();
        for n_iter in [1, 3, 6] {
            let psi = wavelet_function_samples(&w, n_iter).unwrap();
            let half = psi.len() / 2;
            assert_eq!(psi.len() % 2, 0);
            let a = psi[0];
            assert!(a.abs() > 0.0);
            assert!(psi[..half].iter().all(|v| (v - a).abs() < 1e-12));
            assert!(psi[half..].iter().all(|v| (v + a).abs() < 1e-12));
        }
    }

    #[test]
    fn unit_energy() {
        for name in registry_names() {
            let w = registry_get(name).unwrap();
            let psi = wavelet_function_samples(&w, 8).unwrap();
            let e: f64 = psi.iter().map(|v| v * v).sum();
            assert!((e - 1.0).abs() < 1e-9, "{name}");
        }
    }

    #[test]
    fn db4_cascade_converges() {
        // Successive refinements compared on the coarser grid, in function
        // scale. The cascade from a unit impulse converges at first order.
        let w = registry_get("db4").unwrap();
        let scaled = |n: usize| -> Vec<f64> {
            let v = wavelet_function_samples(&w, n).unwrap();
            let s = (1u64 << n) as f64;
            v.iter().map(|x| x * s.sqrt()).collect()
        };
        let step = |coarse: &[f64], fine: &[f64]| {
            coarse
                .iter()
                .enumerate()
                .map(|(i, c)| (c - fine.get(2 * i).copied().unwrap_or(0.0)).abs())
                .fold(0.0, f64::max)
        };
        let (a, b, c) = (scaled(13), scaled(14), scaled(15));
        let (d1, d2) = (step(&a, &b), step(&b, &c));
        assert!(d2 < 1e-3, "max difference {d2}");
        assert!(d2 < 0.6 * d1, "{d1} then {d2}");
    }

    #[test]
    fn zero_iterations_rejected() {
        let w = registry_get("db2").unwrap();
        assert!(wavelet_function_samples(&w, 0).is_err());
    }
}
