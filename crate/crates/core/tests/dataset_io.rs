use wspace::dataset::{holdout_partition, load_dataset, save_dataset, segment_trials, DataError};
use wspace::pipeline::{generate_synthetic, SyntheticSpec};

fn small_set() -> wspace::dataset::TrialSet {
    generate_synthetic(&SyntheticSpec {
        trials_per_class: 3,
        channels: 2,
        ..SyntheticSpec::default()
    })
    .unwrap()
}

#[test]
fn save_then_load_round_trips_through_f32() {
    let ts = small_set();
    let dir = tempfile::tempdir().unwrap();
    let manifest = save_dataset(&ts, dir.path()).unwrap();
    let back = load_dataset(&manifest).unwrap();
    assert_eq!(back.subject_id, ts.subject_id);
    assert_eq!(back.sample_rate_hz, ts.sample_rate_hz);
    assert_eq!(back.trials.len(), ts.trials.len());
    for (a, b) in ts.trials.iter().zip(&back.trials) {
        assert_eq!((a.label, a.channels, a.samples), (b.label, b.channels, b.samples));
        for (x, y) in a.data.iter().zip(&b.data) {
            assert_eq!(*y, *x as f32 as f64);
        }
    }
}

#[test]
fn truncated_trial_file_is_a_shape_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = save_dataset(&small_set(), dir.path()).unwrap();
    let victim = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "f32"))
        .unwrap();
    let bytes = std::fs::read(&victim).unwrap();
    std::fs::write(&victim, &bytes[..bytes.len() - 8]).unwrap();
    assert!(matches!(load_dataset(&manifest), Err(DataError::ShapeMismatch { .. })));
}

#[test]
fn missing_trial_file_and_bad_label_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = save_dataset(&small_set(), dir.path()).unwrap();
    let text = std::fs::read_to_string(&manifest).unwrap();
    std::fs::write(&manifest, text.replacen("\"label\": 1", "\"label\": 7", 1)).unwrap();
    assert!(matches!(load_dataset(&manifest), Err(DataError::UnknownLabel { label: 7, .. })));
    std::fs::write(&manifest, &text).unwrap();
    let first = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "f32"))
        .unwrap();
    std::fs::remove_file(first).unwrap();
    assert!(matches!(load_dataset(&manifest), Err(DataError::MissingFile(_))));
}

#[test]
fn segmentation_and_holdout_cover_every_channel() {
    let ts = small_set();
    let samples = segment_trials(&ts, 4.0, 7.0).unwrap();
    assert_eq!(samples.len(), ts.trials.len() * ts.channels());
    assert!(samples.iter().all(|s| s.signal.len() == 750));
    let labels: Vec<_> = samples.iter().map(|s| s.label).collect();
    let p = holdout_partition(&labels, 0.3, 5).unwrap();
    let mut all: Vec<usize> = p.train.iter().chain(&p.test).copied().collect();
    all.sort_unstable();
    assert_eq!(all, (0..samples.len()).collect::<Vec<_>>());
    for class in 1..=4 {
        assert!(p.test.iter().any(|&i| labels[i] == class));
    }
}
