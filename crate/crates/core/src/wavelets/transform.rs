use super::{WaveletError, WaveletFilter};

/// One analysis step with periodic extension.
///
/// Writes `approx[i] = sum_k h[k] x[(2i + k) mod n]` and the same with the
/// wavelet filter for `detail`. Odd-length input is padded with its last
/// sample first, so both outputs have `ceil(len / 2)` entries.
pub(crate) fn analysis_step(x: &[f64], w: &WaveletFilter) -> (Vec<f64>, Vec<f64>) {
    let padded;
    let x = if x.len() % 2 == 1 {
        padded = {
            let mut v = x.to_vec();
            v.push(*x.last().expect("non-empty"));
            v
        };
        &padded[..]
    } else {
        x
    };
    let n = x.len();
    let half = n / 2;
    let h = &w.rec_lo;
    let g = &w.rec_hi;
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for i in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        let base = 2 * i;
        for k in 0..h.len() {
            let v = x[(base + k) % n];
            a += h[k] * v;
            d += g[k] * v;
        }
        approx[i] = a;
        detail[i] = d;
    }
    (approx, detail)
}

/// Adjoint of [`analysis_step`]; returns a signal of length `out_len`.
pub(crate) fn synthesis_step(
    approx: &[f64],
    detail: &[f64],
    w: &WaveletFilter,
    out_len: usize,
) -> Vec<f64> {
    let half = approx.len();
    let n = 2 * half;
    let h = &w.rec_lo;
    let g = &w.rec_hi;
    let mut x = vec![0.0; n];
    for i in 0..half {
        let a = approx[i];
        let d = detail[i];
        let base = 2 * i;
        for k in 0..h.len() {
            x[(base + k) % n] += h[k] * a + g[k] * d;
        }
    }
    x.truncate(out_len);
    x
}

fn check_length(len: usize, level: usize) -> Result<(), WaveletError> {
    if level == 0 {
        return Err(WaveletError::InvalidLevel(level));
    }
    let required = 1usize
        .checked_shl(level as u32)
        .ok_or(WaveletError::InvalidLevel(level))?;
    if len < required {
        return Err(WaveletError::SignalTooShort { len, required });
    }
    Ok(())
}

/// Multilevel DWT output. `details[0]` is the finest band (scale `j = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct DwtCoeffs {
    pub details: Vec<Vec<f64>>,
    pub approx: Vec<f64>,
    /// Input length at each level, `lengths[0]` being the signal length.
    pub lengths: Vec<usize>,
}

impl DwtCoeffs {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Detail band at scale `j` (1-based, 1 = finest).
    pub fn detail(&self, j: usize) -> &[f64] {
        &self.details[j - 1]
    }

    pub fn energy(&self) -> f64 {
        self.details
            .iter()
            .flatten()
            .chain(&self.approx)
            .map(|v| v * v)
            .sum()
    }
}

pub fn dwt(signal: &[f64], w: &WaveletFilter, levels: usize) -> Result<DwtCoeffs, WaveletError> {
    check_length(signal.len(), levels)?;
    let mut details = Vec::with_capacity(levels);
    let mut lengths = Vec::with_capacity(levels);
    let mut current = signal.to_vec();
    for _ in 0..levels {
        lengths.push(current.len());
        let (a, d) = analysis_step(&current, w);
        details.push(d);
        current = a;
    }
    Ok(DwtCoeffs {
        details,
        approx: current,
        lengths,
    })
}

pub fn idwt(c: &DwtCoeffs, w: &WaveletFilter) -> Vec<f64> {
    let mut current = c.approx.clone();
    for j in (0..c.details.len()).rev() {
        current = synthesis_step(&current, &c.details[j], w, c.lengths[j]);
    }
    current
}

/// Full wavelet packet tree. `nodes[i][j]` is node `j` of level `i`, with
/// `nodes[0][0]` the signal itself. Children of `(i, j)` are `(i+1, 2j)`
/// (lowpass) and `(i+1, 2j+1)` (highpass), i.e. natural ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct WpdTree {
    pub level: usize,
    pub nodes: Vec<Vec<Vec<f64>>>,
}

impl WpdTree {
    pub fn node(&self, level: usize, index: usize) -> &[f64] {
        &self.nodes[level][index]
    }

    pub fn leaves(&self) -> &[Vec<f64>] {
        &self.nodes[self.level]
    }

    /// `E_{i,j}` for every node of `level`.
    pub fn level_energies(&self, level: usize) -> Vec<f64> {
        self.nodes[level]
            .iter()
            .map(|n| n.iter().map(|v| v * v).sum())
            .collect()
    }
}

pub fn wpd(signal: &[f64], w: &WaveletFilter, level: usize) -> Result<WpdTree, WaveletError> {
    check_length(signal.len(), level)?;
    let mut nodes: Vec<Vec<Vec<f64>>> = Vec::with_capacity(level + 1);
    nodes.push(vec![signal.to_vec()]);
    for i in 0..level {
        let next: Vec<Vec<f64>> = nodes[i]
            .iter()
            .flat_map(|node| {
                let (a, d) = analysis_step(node, w);
                [a, d]
            })
            .collect();
        nodes.push(next);
    }
    Ok(WpdTree { level, nodes })
}

#[cfg(test)]
mod tests {
    use super::super::{registry_get, registry_names};
    use super::*;
    use rand::Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = crate::seeds::rng(seed);
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    fn rel_err(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
        let den: f64 = b.iter().map(|y| y * y).sum();
        (num / den).sqrt()
    }

    #[test]
    fn db8_level6_reconstructs() {
        let w = registry_get("db8").unwrap();
        let x = noise(1024, 3);
        let c = dwt(&x, &w, 6).unwrap();
        assert!(rel_err(&idwt(&c, &w), &x) < 1e-8);
    }

    #[test]
    fn haar_impulse() {
        let w = registry_get("haar").unwrap();
        let mut x = vec![0.0; 8];
        x[0] = 1.0;
        let c = dwt(&x, &w, 1).unwrap();
        let nz = |v: &[f64]| v.iter().filter(|a| a.abs() > 1e-15).count();
        assert_eq!(nz(&c.approx), 1);
        assert_eq!(nz(c.detail(1)), 1);
        assert!((c.approx[0].abs() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((c.detail(1)[0].abs() - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn zeros_stay_zero() {
        let w = registry_get("db4").unwrap();
        let c = dwt(&[0.0; 64], &w, 3).unwrap();
        assert_eq!(c.energy(), 0.0);
        let t = wpd(&[0.0; 64], &w, 3).unwrap();
        assert!(t.leaves().iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn too_short_and_bad_level() {
        let w = registry_get("db2").unwrap();
        assert_eq!(
            dwt(&[1.0; 7], &w, 3),
            Err(WaveletError::SignalTooShort { len: 7, required: 8 })
        );
        assert_eq!(wpd(&[1.0; 8], &w, 0), Err(WaveletError::InvalidLevel(0)));
    }

    #[test]
    fn odd_lengths_reconstruct() {
        let w = registry_get("sym5").unwrap();
        for n in [250, 251, 750, 125] {
            let x = noise(n, n as u64);
            let c = dwt(&x, &w, 4).unwrap();
            assert_eq!(c.lengths[0], n);
            assert!(rel_err(&idwt(&c, &w), &x) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn packet_leaf_count_and_lengths() {
        let w = registry_get("db4").unwrap();
        let t = wpd(&noise(250, 1), &w, 4).unwrap();
        assert_eq!(t.leaves().len(), 16);
        assert!(t.leaves().iter().all(|l| l.len() == 16));
    }

    #[test]
    fn parseval_every_level_every_wavelet() {
        let x = noise(256, 11);
        let e: f64 = x.iter().map(|v| v * v).sum();
        for name in registry_names() {
            let w = registry_get(name).unwrap();
            let t = wpd(&x, &w, 4).unwrap();
            for i in 0..=4 {
                let s: f64 = t.level_energies(i).iter().sum();
                assert!(((s - e) / e).abs() < 1e-8, "{name} level {i}");
            }
        }
    }

    #[test]
    fn first_packet_level_equals_dwt() {
        let w = registry_get("coif2").unwrap();
        let x = noise(128, 5);
        let t = wpd(&x, &w, 1).unwrap();
        let c = dwt(&x, &w, 1).unwrap();
        assert_eq!(t.node(1, 0), &c.approx[..]);
        assert_eq!(t.node(1, 1), c.detail(1));
    }
}
