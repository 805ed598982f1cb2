use crate::wavelets::{wpd, WaveletFilter};

use super::FeatureError;

/// Shannon entropies of the level-`M` packet nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketEntropy {
    /// One entropy per node, node order `j = 0..2^M`.
    pub values: Vec<f64>,
    /// Nodes whose energy was zero; their entropy is reported as 0.
    pub zero_energy_nodes: Vec<usize>,
}

/// Entropy of the energy distribution across one node's coefficients,
/// natural log, `0 log 0 = 0`. Returns `None` for a zero-energy node.
pub fn node_entropy(coeffs: &[f64]) -> Option<f64> {
    let energy: f64 = coeffs.iter().map(|c| c * c).sum();
    if energy <= 0.0 {
        return None;
    }
    let mut se = 0.0;
    for c in coeffs {
        let p = c * c / energy;
        if p > 0.0 {
            se -= p * p.ln();
        }
    }
    Some(se.max(0.0))
}

/// Wavelet packet Shannon entropy vector of `window` at level `level`.
pub fn wp_entropy(
    window: &[f64],
    wavelet: &WaveletFilter,
    level: usize,
) -> Result<PacketEntropy, FeatureError> {
    let tree = wpd(window, wavelet, level)?;
    let mut values = Vec::with_capacity(tree.leaves().len());
    let mut zero_energy_nodes = Vec::new();
    for (j, node) in tree.leaves().iter().enumerate() {
        match node_entropy(node) {
            Some(se) => values.push(se),
            None => {
                zero_energy_nodes.push(j);
                values.push(0.0);
            }
        }
    }
    Ok(PacketEntropy {
        values,
        zero_energy_nodes,
    })
}
