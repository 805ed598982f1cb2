use super::FeatureError;

/// AR model fitted by Burg's lattice recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct BurgModel {
    /// `a[1..=p]` with `x[n] = -sum_i a[i] x[n-i] + e[n]`.
    pub coefficients: Vec<f64>,
    pub reflection: Vec<f64>,
    /// Final forward/backward prediction error power.
    pub error_power: f64,
}

/// Burg estimate of an order-`order` AR model.
///
/// Each stage picks the reflection coefficient minimizing the summed forward
/// and backward prediction error power, so `|k| <= 1` at every stage and the
/// fitted model is stable.
pub fn burg(x: &[f64], order: usize) -> Result<BurgModel, FeatureError> {
    let n = x.len();
    if order == 0 || n <= 2 * order {
        return Err(FeatureError::WindowTooShort { len: n, order });
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    if var <= f64::MIN_POSITIVE || !var.is_finite() {
        return Err(FeatureError::ZeroVariance);
    }

    let mut f = x.to_vec();
    let mut b = x.to_vec();
    let mut a = vec![0.0; order];
    let mut reflection = Vec::with_capacity(order);
    let mut err = x.iter().map(|v| v * v).sum::<f64>() / n as f64;

    for m in 1..=order {
        let mut num = 0.0;
        let mut den = 0.0;
        for i in m..n {
            num += f[i] * b[i - 1];
            den += f[i] * f[i] + b[i - 1] * b[i - 1];
        }
        let k = if den > 0.0 { (-2.0 * num / den).clamp(-1.0, 1.0) } else { 0.0 };
        reflection.push(k);

        let prev = a.clone();
        a[m - 1] = k;
        for i in 0..m - 1 {
            a[i] = prev[i] + k * prev[m - 2 - i];
        }
        // update errors in place, descending so b[i-1] is still the old value
        for i in (m..n).rev() {
            let fi = f[i];
            f[i] = fi + k * b[i - 1];
            b[i] = b[i - 1] + k * fi;
        }
        err *= 1.0 - k * k;
    }
    Ok(BurgModel {
        coefficients: a,
        reflection,
        error_power: err,
    })
}

/// The AR coefficients of [`burg`], `a[1..=p]`.
pub fn burg_ar(window: &[f64], order: usize) -> Result<Vec<f64>, FeatureError> {
    burg(window, order).map(|m| m.coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Normal};

    fn ar2(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = crate::seeds::rng(seed);
        let e = Normal::new(0.0, 1.0).unwrap();
        let mut x = vec![0.0; n + 200];
        for i in 2..x.len() {
            x[i] = 0.5 * x[i - 1] - 0.25 * x[i - 2] + e.sample(&mut rng);
        }
        x.split_off(200)
    }

    #[test]
    fn recovers_ar2() {
        let m = burg(&ar2(10_000, 1), 2).unwrap();
        assert!((m.coefficients[0] + 0.5).abs() < 0.05);
        assert!((m.coefficients[1] - 0.25).abs() < 0.05);
    }

    #[test]
    fn order_one_closed_form() {
        // k1 = -2 sum x[n] x[n-1] / sum (x[n]^2 + x[n-1]^2)
        let x = [1.0, 2.0, -1.0, 0.5, 3.0];
        let num: f64 = (1..5).map(|i| x[i] * x[i - 1]).sum();
        let den: f64 = (1..5).map(|i| x[i] * x[i] + x[i - 1] * x[i - 1]).sum();
        let m = burg(&x, 1).unwrap();
        assert!((m.coefficients[0] - (-2.0 * num / den)).abs() < 1e-15);
    }

    #[test]
    fn white_noise_is_near_zero() {
        let mut rng = crate::seeds::rng(3);
        let e = Normal::new(0.0, 1.0).unwrap();
        let x: Vec<f64> = (0..10_000).map(|_| e.sample(&mut rng)).collect();
        let a = burg_ar(&x, 6).unwrap();
        assert!(a.iter().all(|v| v.abs() < 0.1), "{a:?}");
    }

    #[test]
    fn degenerate_windows() {
        assert_eq!(burg_ar(&[0.0; 50], 6), Err(FeatureError::ZeroVariance));
        assert_eq!(burg_ar(&[3.0; 50], 6), Err(FeatureError::ZeroVariance));
        assert_eq!(
            burg_ar(&[1.0, 2.0, 3.0], 2),
            Err(FeatureError::WindowTooShort { len: 3, order: 2 })
        );
    }

    #[test]
    fn scale_invariant() {
        let x = ar2(300, 9);
        let y: Vec<f64> = x.iter().map(|v| v * 1e-3).collect();
        let a = burg_ar(&x, 6).unwrap();
        let b = burg_ar(&y, 6).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() < 1e-10);
        }
    }
}
