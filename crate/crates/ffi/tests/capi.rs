use std::ffi::{CStr, CString};
use std::ptr;

use wspace_ffi::*;

fn last_error() -> String {
    let p = ws_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_nul_terminated() {
    let v = unsafe { CStr::from_ptr(ws_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn null_arguments_are_rejected() {
    let status = unsafe { ws_dataset_load(ptr::null(), ptr::null_mut()) };
    assert_eq!(status, WsStatus::NullPointer);
    assert!(last_error().contains("null"));
    unsafe {
        ws_dataset_free(ptr::null_mut());
        ws_autoencoder_free(ptr::null_mut());
        ws_svm_free(ptr::null_mut());
    }
}

#[test]
fn missing_manifest_is_a_data_error() {
    let path = CString::new("/nonexistent/manifest.json").unwrap();
    let mut ds = ptr::null_mut();
    let status = unsafe { ws_dataset_load(path.as_ptr(), &mut ds) };
    assert_eq!(status, WsStatus::DataError);
    assert!(ds.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn synthetic_dataset_round_trip() {
    let mut ds = ptr::null_mut();
    unsafe {
        assert_eq!(ws_dataset_synthetic(2, 3, 0.5, 11, &mut ds), WsStatus::Ok);
        let (mut n, mut c, mut s) = (0, 0, 0);
        assert_eq!(ws_dataset_shape(ds, &mut n, &mut c, &mut s), WsStatus::Ok);
        assert_eq!((n, c, s), (8, 3, 1750));
        let mut rate = 0.0;
        ws_dataset_sample_rate(ds, &mut rate);
        assert_eq!(rate, 250.0);
        let mut label = 0u8;
        assert_eq!(ws_dataset_label(ds, 0, &mut label), WsStatus::Ok);
        assert!((1..=4).contains(&label));
        assert_eq!(ws_dataset_label(ds, 8, &mut label), WsStatus::InvalidArgument);
        let mut buf = vec![0.0; s];
        assert_eq!(ws_dataset_copy_channel(ds, 1, 2, buf.as_mut_ptr(), s), WsStatus::Ok);
        assert!(buf.iter().any(|&v| v != 0.0));
        assert_eq!(
            ws_dataset_copy_channel(ds, 1, 2, buf.as_mut_ptr(), s - 1),
            WsStatus::InvalidArgument
        );
        ws_dataset_free(ds);
    }
    let mut ds = ptr::null_mut();
    assert_eq!(unsafe { ws_dataset_synthetic(0, 3, 0.5, 1, &mut ds) }, WsStatus::ConfigError);
}

#[test]
fn autoencoder_then_features() {
    let signal: Vec<f64> = (0..500).map(|i| (i as f64 * 0.1).sin() + 0.01 * (i % 7) as f64).collect();
    let mut ae = ptr::null_mut();
    unsafe {
        assert_eq!(
            ws_autoencoder_train(signal.as_ptr(), signal.len(), 4, 40, 3, &mut ae),
            WsStatus::Ok
        );
        let mut len = 0;
        ws_autoencoder_weight_len(ae, &mut len);
        assert_eq!(len, 2000);
        let mut w = vec![0.0; len];
        assert_eq!(ws_autoencoder_copy_weights(ae, w.as_mut_ptr(), len), WsStatus::Ok);
        assert!(w.iter().all(|v| v.is_finite()));

        let (mut cost, mut epochs, mut conv) = (0.0, 0, false);
        ws_autoencoder_summary(ae, &mut cost, &mut epochs, &mut conv);
        assert!(cost.is_finite() && (1..=40).contains(&epochs));

        let mut h = [0.0; 4];
        assert_eq!(
            ws_autoencoder_encode(ae, signal.as_ptr(), signal.len(), h.as_mut_ptr(), 4),
            WsStatus::Ok
        );
        assert!(h.iter().all(|&v| v > 0.0 && v < 1.0));
        assert_eq!(
            ws_autoencoder_encode(ae, signal.as_ptr(), 10, h.as_mut_ptr(), 4),
            WsStatus::DataError
        );

        let flen = ws_feature_len(len, 250);
        assert_eq!(flen, 8 * 24);
        let mut f = vec![0.0; flen];
        assert_eq!(ws_window_features(w.as_ptr(), len, 250, f.as_mut_ptr(), flen), WsStatus::Ok);
        assert!(f.iter().all(|v| v.is_finite()));
        assert_eq!(
            ws_window_features(w.as_ptr(), len, 250, f.as_mut_ptr(), flen - 1),
            WsStatus::InvalidArgument
        );
        ws_autoencoder_free(ae);
    }
}

#[test]
fn constant_signal_is_a_data_error() {
    let signal = vec![1.0; 64];
    let mut ae = ptr::null_mut();
    let status = unsafe { ws_autoencoder_train(signal.as_ptr(), 64, 4, 10, 0, &mut ae) };
    assert_eq!(status, WsStatus::DataError);
    assert!(ae.is_null());
}

#[test]
fn svm_separates_blobs() {
    let centers = [[0.0, 0.0], [5.0, 0.0], [0.0, 5.0], [5.0, 5.0]];
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (k, c) in centers.iter().enumerate() {
        for i in 0..10 {
            let d = (i as f64 * 0.37).sin() * 0.5;
            x.extend_from_slice(&[c[0] + d, c[1] - d]);
            y.push(k as u8 + 1);
        }
    }
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(ws_svm_train(x.as_ptr(), 40, 2, y.as_ptr(), &mut m), WsStatus::Ok);
        for (k, c) in centers.iter().enumerate() {
            let mut class = 0u8;
            let mut dec = [0.0; 4];
            assert_eq!(ws_svm_predict(m, c.as_ptr(), 2, &mut class, dec.as_mut_ptr()), WsStatus::Ok);
            assert_eq!(class, k as u8 + 1);
            let best = dec.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(dec[k], best);
            assert_eq!(ws_svm_predict(m, c.as_ptr(), 2, &mut class, ptr::null_mut()), WsStatus::Ok);
        }
        let mut class = 0u8;
        assert_eq!(
            ws_svm_predict(m, x.as_ptr(), 3, &mut class, ptr::null_mut()),
            WsStatus::DataError
        );
        ws_svm_free(m);
    }
    let mut m = ptr::null_mut();
    let status = unsafe { ws_svm_train(x.as_ptr(), 10, 2, y.as_ptr(), &mut m) };
    assert_eq!(status, WsStatus::DataError);
    assert!(last_error().contains("class"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/wspace.h")).unwrap();
    for name in [
        "ws_last_error_message",
        "ws_dataset_load",
        "ws_dataset_synthetic",
        "ws_autoencoder_train",
        "ws_window_features",
        "ws_svm_train",
        "ws_svm_predict",
        "typedef struct WsSvm WsSvm",
        "WS_STATUS_NULL_POINTER = 1",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
