//! C ABI over the `wspace` library.
//!
//! All objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns a
//! [`WsStatus`]; on failure the message is available from
//! [`ws_last_error_message`] until the next failing call on the same thread.
//!
//! # Safety
//!
//! Pointer arguments must be null or valid for the stated length. Handles must
//! come from this library and must not be used after being freed.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wspace::autoenc::{train_autoencoder, AutoencoderConfig, TrainedAutoencoder};
use wspace::classify::{train_svm_ova, SvmModel, SvmParams};
use wspace::dataset::{load_dataset, TrialSet};
use wspace::error::ErrorKind;
use wspace::features::{window_features, FeatureConfig};
use wspace::pipeline::{generate_synthetic, SyntheticSpec};
use wspace::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConfigError = 3,
    DataError = 4,
    NumericError = 5,
    Panic = 6,
}

/// Loaded or generated trial set.
pub struct WsDataset(TrialSet);

/// Autoencoder trained on a single signal.
pub struct WsAutoencoder(TrainedAutoencoder);

/// One-against-all SVM over four classes.
pub struct WsSvm(SvmModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: WsStatus, msg: impl Into<String>) -> WsStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> WsStatus {
    let status = match e.kind() {
        ErrorKind::Config => WsStatus::ConfigError,
        ErrorKind::Data => WsStatus::DataError,
        ErrorKind::Numeric => WsStatus::NumericError,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> WsStatus) -> WsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(WsStatus::Panic, format!("panic: {msg}"))
        }
    }
}

unsafe fn slice<'a>(p: *const f64, len: usize) -> Option<&'a [f64]> {
    if p.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(WsStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ws_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated library version.
#[no_mangle]
pub extern "C" fn ws_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn ws_dataset_load(manifest_path: *const c_char, out: *mut *mut WsDataset) -> WsStatus {
    non_null!(manifest_path, out);
    guard(|| {
        let path = match CStr::from_ptr(manifest_path).to_str() {
            Ok(p) => p,
            Err(_) => return fail(WsStatus::InvalidArgument, "manifest path is not UTF-8"),
        };
        match load_dataset(path) {
            Ok(ts) => {
                write_out(out, WsDataset(ts));
                WsStatus::Ok
            }
            Err(e) => from_error(e.into()),
        }
    })
}

/// Generates the default synthetic four-class set with the given overrides.
#[no_mangle]
pub unsafe extern "C" fn ws_dataset_synthetic(
    trials_per_class: usize,
    channels: usize,
    noise_level: f64,
    seed: u64,
    out: *mut *mut WsDataset,
) -> WsStatus {
    non_null!(out);
    guard(|| {
        let spec = SyntheticSpec {
            trials_per_class,
            channels,
            noise_level,
            seed,
            ..SyntheticSpec::default()
        };
        match generate_synthetic(&spec) {
            Ok(ts) => {
                write_out(out, WsDataset(ts));
                WsStatus::Ok
            }
            Err(e) => fail(WsStatus::ConfigError, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn ws_dataset_free(ds: *mut WsDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Number of trials, channels per trial and samples per channel.
#[no_mangle]
pub unsafe extern "C" fn ws_dataset_shape(
    ds: *const WsDataset,
    trials: *mut usize,
    channels: *mut usize,
    samples: *mut usize,
) -> WsStatus {
    non_null!(ds, trials, channels, samples);
    let ts = &(*ds).0;
    *trials = ts.trials.len();
    *channels = ts.channels();
    *samples = ts.samples_per_trial();
    WsStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn ws_dataset_sample_rate(ds: *const WsDataset, rate_hz: *mut f64) -> WsStatus {
    non_null!(ds, rate_hz);
    *rate_hz = (*ds).0.sample_rate_hz;
    WsStatus::Ok
}

/// Class label (1 to 4) of trial `trial`.
#[no_mangle]
pub unsafe extern "C" fn ws_dataset_label(ds: *const WsDataset, trial: usize, label: *mut u8) -> WsStatus {
    non_null!(ds, label);
    let ts = &(*ds).0;
    match ts.trials.get(trial) {
        Some(t) => {
            *label = t.label;
            WsStatus::Ok
        }
        None => fail(WsStatus::InvalidArgument, format!("trial {trial} out of range")),
    }
}

/// Copies one channel of one trial into `buf`, which must hold exactly the
/// number of samples per channel.
#[no_mangle]
pub unsafe extern "C" fn ws_dataset_copy_channel(
    ds: *const WsDataset,
    trial: usize,
    channel: usize,
    buf: *mut f64,
    len: usize,
) -> WsStatus {
    non_null!(ds, buf);
    let ts = &(*ds).0;
    let Some(t) = ts.trials.get(trial) else {
        return fail(WsStatus::InvalidArgument, format!("trial {trial} out of range"));
    };
    if channel >= t.channels {
        return fail(WsStatus::InvalidArgument, format!("channel {channel} out of range"));
    }
    if len != t.samples {
        return fail(
            WsStatus::InvalidArgument,
            format!("buffer holds {len} samples, channel has {}", t.samples),
        );
    }
    std::slice::from_raw_parts_mut(buf, len).copy_from_slice(t.channel(channel));
    WsStatus::Ok
}

/// Trains an autoencoder on `signal`. A `max_epochs` of 0 keeps the default.
#[no_mangle]
pub unsafe extern "C" fn ws_autoencoder_train(
    signal: *const f64,
    len: usize,
    hidden: usize,
    max_epochs: usize,
    seed: u64,
    out: *mut *mut WsAutoencoder,
) -> WsStatus {
    non_null!(signal, out);
    guard(|| {
        let defaults = AutoencoderConfig::default();
        let cfg = AutoencoderConfig {
            input_dim: len,
            hidden_dim: hidden,
            max_epochs: if max_epochs == 0 { defaults.max_epochs } else { max_epochs },
            seed,
            ..defaults
        };
        let x = slice(signal, len).unwrap_or_default();
        match train_autoencoder(x, &cfg) {
            Ok(ae) => {
                write_out(out, WsAutoencoder(ae));
                WsStatus::Ok
            }
            Err(e) => from_error(e.into()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn ws_autoencoder_free(ae: *mut WsAutoencoder) {
    if !ae.is_null() {
        drop(Box::from_raw(ae));
    }
}

/// Length of the flattened encoder weight vector (input size times hidden size).
#[no_mangle]
pub unsafe extern "C" fn ws_autoencoder_weight_len(ae: *const WsAutoencoder, len: *mut usize) -> WsStatus {
    non_null!(ae, len);
    *len = (*ae).0.w_e.len();
    WsStatus::Ok
}

/// Copies the row-major encoder weights into `buf` of exactly `len` entries.
#[no_mangle]
pub unsafe extern "C" fn ws_autoencoder_copy_weights(ae: *const WsAutoencoder, buf: *mut f64, len: usize) -> WsStatus {
    non_null!(ae, buf);
    let w = (*ae).0.weight_vector();
    if len != w.values.len() {
        return fail(
            WsStatus::InvalidArgument,
            format!("buffer holds {len} values, weight vector has {}", w.values.len()),
        );
    }
    std::slice::from_raw_parts_mut(buf, len).copy_from_slice(&w.values);
    WsStatus::Ok
}

/// Final training cost, epochs run and whether training converged.
#[no_mangle]
pub unsafe extern "C" fn ws_autoencoder_summary(
    ae: *const WsAutoencoder,
    final_cost: *mut f64,
    epochs: *mut usize,
    converged: *mut bool,
) -> WsStatus {
    non_null!(ae, final_cost, epochs, converged);
    let m = &(*ae).0;
    *final_cost = m.final_cost;
    *epochs = m.epochs_run;
    *converged = m.converged;
    WsStatus::Ok
}

/// Hidden activations for a raw signal of the training length.
#[no_mangle]
pub unsafe extern "C" fn ws_autoencoder_encode(
    ae: *const WsAutoencoder,
    signal: *const f64,
    len: usize,
    out: *mut f64,
    out_len: usize,
) -> WsStatus {
    non_null!(ae, signal, out);
    guard(|| {
        let m = &(*ae).0;
        if out_len != m.hidden_dim {
            return fail(
                WsStatus::InvalidArgument,
                format!("output holds {out_len} values, hidden size is {}", m.hidden_dim),
            );
        }
        let x = m.scale_input(slice(signal, len).unwrap_or_default());
        match m.encode(&x) {
            Ok(h) => {
                std::slice::from_raw_parts_mut(out, out_len).copy_from_slice(&h);
                WsStatus::Ok
            }
            Err(e) => from_error(e.into()),
        }
    })
}

/// Number of feature values `ws_window_features` produces for a vector of
/// `len` entries split into windows of `window`.
#[no_mangle]
pub extern "C" fn ws_feature_len(len: usize, window: usize) -> usize {
    if window == 0 {
        return 0;
    }
    let cfg = FeatureConfig {
        window_size: window,
        ..FeatureConfig::default()
    };
    (len / window) * cfg.features_per_window()
}

/// Windowed AR, packet-entropy and multifractal features with default
/// settings. `out` must hold `ws_feature_len(len, window)` values.
#[no_mangle]
pub unsafe extern "C" fn ws_window_features(
    v: *const f64,
    len: usize,
    window: usize,
    out: *mut f64,
    out_len: usize,
) -> WsStatus {
    non_null!(v, out);
    guard(|| {
        let expected = ws_feature_len(len, window);
        if out_len != expected {
            return fail(
                WsStatus::InvalidArgument,
                format!("output holds {out_len} values, expected {expected}"),
            );
        }
        let cfg = FeatureConfig {
            window_size: window,
            ..FeatureConfig::default()
        };
        match window_features(slice(v, len).unwrap_or_default(), &cfg) {
            Ok(f) => {
                std::slice::from_raw_parts_mut(out, out_len).copy_from_slice(&f.values);
                WsStatus::Ok
            }
            Err(e) => from_error(e.into()),
        }
    })
}

/// Trains a one-against-all RBF SVM with default parameters on `rows` row-major
/// feature vectors of `cols` values and labels in 1 to 4.
#[no_mangle]
pub unsafe extern "C" fn ws_svm_train(
    x: *const f64,
    rows: usize,
    cols: usize,
    labels: *const u8,
    out: *mut *mut WsSvm,
) -> WsStatus {
    non_null!(x, labels, out);
    guard(|| {
        let Some(n) = rows.checked_mul(cols) else {
            return fail(WsStatus::InvalidArgument, "rows * cols overflows");
        };
        let data = std::slice::from_raw_parts(x, n);
        let rows_v: Vec<Vec<f64>> = if cols == 0 {
            vec![Vec::new(); rows]
        } else {
            data.chunks_exact(cols).map(<[f64]>::to_vec).collect()
        };
        let y = std::slice::from_raw_parts(labels, rows);
        match train_svm_ova(&rows_v, y, &SvmParams::default()) {
            Ok(m) => {
                write_out(out, WsSvm(m));
                WsStatus::Ok
            }
            Err(e) => from_error(e.into()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn ws_svm_free(m: *mut WsSvm) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Predicts the class of one feature vector. `decision` may be null; otherwise
/// it receives the four per-class decision values.
#[no_mangle]
pub unsafe extern "C" fn ws_svm_predict(
    m: *const WsSvm,
    x: *const f64,
    cols: usize,
    class_out: *mut u8,
    decision: *mut f64,
) -> WsStatus {
    non_null!(m, x, class_out);
    guard(|| match (*m).0.predict(std::slice::from_raw_parts(x, cols)) {
        Ok((c, values)) => {
            *class_out = c;
            if !decision.is_null() {
                std::slice::from_raw_parts_mut(decision, values.len()).copy_from_slice(&values);
            }
            WsStatus::Ok
        }
        Err(e) => from_error(e.into()),
    })
}
