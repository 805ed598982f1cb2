//! Weight-space feature extraction for motor-imagery EEG.
//!
//! Every signal segment is re-represented by the input-to-hidden weight matrix
//! of an autoencoder trained on that one segment. Windowed features (Burg AR
//! coefficients, wavelet-packet Shannon entropies and wavelet-leader
//! multifractal estimates) are computed over the flattened weights and fed to
//! a one-against-all RBF SVM, or to shrinkage LDA for comparison.
//!
//! Module map:
//!
//! | module       | contents                                                   |
//! |--------------|------------------------------------------------------------|
//! | [`dataset`]  | trial sets, on-disk manifest format, segmentation, holdout |
//! | [`wavelets`] | filter registry, DWT/IDWT, packets, cascade, denoising     |
//! | [`autoenc`]  | per-signal autoencoder and the SCG optimizer               |
//! | [`features`] | Burg AR, packet entropy, leaders, windowed features        |
//! | [`classify`] | standardization, OvA-SVM, LDA, evaluation metrics          |
//! | [`pipeline`] | run configuration, synthetic data, cases, sweeps, reports  |

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod autoenc;
pub mod classify;
pub mod dataset;
pub mod error;
pub mod features;
pub mod pipeline;
pub mod seeds;
pub mod wavelets;

pub use error::{Error, Result};
