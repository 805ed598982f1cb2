use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::report::{
    AutoencoderSummary, CaseResult, DatasetSummary, ExperimentReport, HiddenSweepRow, PartitionSummary, Timing,
    WindowSweepRow,
};
use super::{generate_synthetic, preprocess, CaseMode, DataSource, RunConfig};
use crate::autoenc::{train_autoencoder, AutoencoderConfig, TrainedAutoencoder};
use crate::classify::{evaluate, Classifier, ClassifierConfig, EvalReport};
use crate::dataset::{
    holdout_partition, load_dataset, segment_trials, ClassId, Partition, SampleRecord, TrialSet, NUM_CLASSES,
};
use crate::features::{window_features, FeatureConfig};
use crate::wavelets::{registry_names, select_wavelet};
use crate::{seeds, Error, Result};

/// Data after loading, preprocessing, segmentation and partitioning.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub dataset: DatasetSummary,
    pub samples: Vec<SampleRecord>,
    pub partition: Partition,
    pub segment_len: usize,
    pub timings: Vec<Timing>,
}

impl Prepared {
    pub fn labels(&self) -> Vec<ClassId> {
        self.samples.iter().map(|s| s.label).collect()
    }

    pub fn partition_summary(&self) -> PartitionSummary {
        let mut train_per_class = [0; NUM_CLASSES];
        let mut test_per_class = [0; NUM_CLASSES];
        for &i in &self.partition.train {
            train_per_class[self.samples[i].label as usize - 1] += 1;
        }
        for &i in &self.partition.test {
            test_per_class[self.samples[i].label as usize - 1] += 1;
        }
        PartitionSummary {
            train: self.partition.train.len(),
            test: self.partition.test.len(),
            holdout_p: self.partition.holdout_p,
            seed: self.partition.seed,
            train_per_class,
            test_per_class,
        }
    }
}

/// One vector per sample that features are computed over.
#[derive(Debug, Clone)]
pub struct Representations {
    pub case: CaseMode,
    pub vectors: Vec<Vec<f64>>,
    pub autoencoder: Option<AutoencoderSummary>,
}

fn timed<T>(timings: &mut Vec<Timing>, stage: impl Into<String>, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f();
    timings.push(Timing {
        stage: stage.into(),
        seconds: start.elapsed().as_secs_f64(),
    });
    out
}

fn load(cfg: &RunConfig) -> Result<TrialSet> {
    let ts = match &cfg.data {
        DataSource::Synthetic(spec) => generate_synthetic(spec).map_err(|e| Error::Config(e.to_string()))?,
        DataSource::Manifest { path } => load_dataset(path)?,
    };
    ts.validate()?;
    Ok(ts)
}

/// Loads, preprocesses, segments and partitions the configured data.
pub fn prepare(cfg: &RunConfig) -> Result<Prepared> {
    cfg.validate()?;
    let mut timings = Vec::new();
    let ts = timed(&mut timings, "load", || load(cfg)).map_err(Error::stage("load"))?;
    let segment_len = cfg.segment_length(ts.sample_rate_hz)?;
    let ts = timed(&mut timings, "preprocess", || Ok(preprocess(&ts, cfg.preprocess)?))
        .map_err(Error::stage("preprocess"))?;
    let samples = timed(&mut timings, "segment", || {
        Ok(segment_trials(&ts, cfg.segment_start_s, cfg.segment_end_s)?)
    })
    .map_err(Error::stage("segment"))?;
    let labels: Vec<ClassId> = samples.iter().map(|s| s.label).collect();
    let partition = timed(&mut timings, "partition", || Ok(holdout_partition(&labels, cfg.holdout_p, cfg.seed)?))
        .map_err(Error::stage("partition"))?;
    let dataset = DatasetSummary {
        subject_id: ts.subject_id.clone(),
        trials: ts.trials.len(),
        channels: ts.channels(),
        samples_per_trial: ts.samples_per_trial(),
        sample_rate_hz: ts.sample_rate_hz,
        segments: samples.len(),
        segment_length: segment_len,
        preprocessed: cfg.preprocess,
    };
    log::info!(
        "prepared {} segments of {} samples ({} train / {} test)",
        samples.len(),
        segment_len,
        partition.train.len(),
        partition.test.len()
    );
    Ok(Prepared {
        dataset,
        samples,
        partition,
        segment_len,
        timings,
    })
}

fn sample_autoencoder_config(cfg: &RunConfig, index: usize) -> AutoencoderConfig {
    AutoencoderConfig {
        seed: seeds::derive(cfg.seed, index as u64),
        ..cfg.autoencoder
    }
}

fn check_autoencoder_input(cfg: &RunConfig, segment_len: usize) -> Result<()> {
    if cfg.autoencoder.input_dim != segment_len {
        return Err(Error::Config(format!(
            "autoencoder input_dim {} differs from the segment length {segment_len}",
            cfg.autoencoder.input_dim
        )));
    }
    Ok(())
}

fn train_all(prepared: &Prepared, cfg: &RunConfig) -> Result<Vec<TrainedAutoencoder>> {
    check_autoencoder_input(cfg, prepared.segment_len)?;
    prepared
        .samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            train_autoencoder(&s.signal, &sample_autoencoder_config(cfg, i)).map_err(|e| {
                log::error!("autoencoder for sample {} failed: {e}", s.origin);
                Error::from(e)
            })
        })
        .collect()
}

/// The per-sample vectors for `case`: raw segments for cases 1 and 2, trained
/// encoder weights for case 3. Sample `i` is trained with a seed derived from
/// the master seed and `i`, so the result does not depend on scheduling.
pub fn representations(prepared: &Prepared, cfg: &RunConfig, case: CaseMode) -> Result<Representations> {
    match case {
        CaseMode::Case1 | CaseMode::Case2 => Ok(Representations {
            case,
            vectors: prepared.samples.iter().map(|s| s.signal.clone()).collect(),
            autoencoder: None,
        }),
        CaseMode::Case3 => {
            let models = train_all(prepared, cfg).map_err(Error::stage("autoencoder"))?;
            let summary = AutoencoderSummary::from_models(&models, &prepared.samples);
            Ok(Representations {
                case,
                vectors: models.into_iter().map(|m| m.w_e).collect(),
                autoencoder: Some(summary),
            })
        }
    }
}

fn feature_matrix(vectors: &[Vec<f64>], fcfg: &FeatureConfig) -> Result<Vec<Vec<f64>>> {
    if let Some(v) = vectors.first() {
        if fcfg.window_size > v.len() {
            return Err(Error::Config(format!(
                "window size {} exceeds the vector length {}",
                fcfg.window_size,
                v.len()
            )));
        }
    }
    vectors
        .par_iter()
        .map(|v| Ok(window_features(v, fcfg)?.values))
        .collect()
}

/// Trial-level majority vote over the channel predictions of each trial.
/// Trials appear in order of first occurrence; vote ties go to the lowest id.
pub fn majority_vote(
    trial_ids: &[&str],
    predictions: &[ClassId],
    labels: &[ClassId],
) -> (Vec<ClassId>, Vec<ClassId>) {
    let mut order: Vec<&str> = Vec::new();
    let mut votes: BTreeMap<&str, ([usize; NUM_CLASSES], ClassId)> = BTreeMap::new();
    for ((&id, &p), &l) in trial_ids.iter().zip(predictions).zip(labels) {
        let entry = votes.entry(id).or_insert_with(|| {
            order.push(id);
            ([0; NUM_CLASSES], l)
        });
        entry.0[p as usize - 1] += 1;
    }
    let mut preds = Vec::with_capacity(order.len());
    let mut truth = Vec::with_capacity(order.len());
    for id in order {
        let (counts, label) = votes[id];
        let mut best = 0;
        for k in 1..NUM_CLASSES {
            if counts[k] > counts[best] {
                best = k;
            }
        }
        preds.push(best as ClassId + 1);
        truth.push(label);
    }
    (preds, truth)
}

fn split_rows(features: &[Vec<f64>], idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| features[i].clone()).collect()
}

fn classify_case(
    prepared: &Prepared,
    features: &[Vec<f64>],
    clf: &ClassifierConfig,
) -> Result<(EvalReport, EvalReport)> {
    let part = &prepared.partition;
    let labels = prepared.labels();
    let x_train = split_rows(features, &part.train);
    let y_train: Vec<ClassId> = part.train.iter().map(|&i| labels[i]).collect();
    let model = Classifier::train(&x_train, &y_train, clf)?;
    let x_test = split_rows(features, &part.test);
    let y_test: Vec<ClassId> = part.test.iter().map(|&i| labels[i]).collect();
    let preds = model.predict_all(&x_test)?;
    let eval = evaluate(&preds, &y_test)?;
    let ids: Vec<&str> = part
        .test
        .iter()
        .map(|&i| prepared.samples[i].origin.trial_id.as_str())
        .collect();
    let (tp, tl) = majority_vote(&ids, &preds, &y_test);
    let vote = evaluate(&tp, &tl)?;
    Ok((eval, vote))
}

fn case_result(
    prepared: &Prepared,
    reps: &Representations,
    features: &[Vec<f64>],
    fcfg: &FeatureConfig,
    clf: &ClassifierConfig,
    timings: &mut Vec<Timing>,
) -> Result<CaseResult> {
    let stage = format!("classify case{} {}", reps.case.number(), clf.name());
    let (eval, vote) = timed(timings, stage, || classify_case(prepared, features, clf)).map_err(Error::stage("classify"))?;
    let rep_len = reps.vectors.first().map_or(0, Vec::len);
    log::info!(
        "{} with {}: accuracy {:.2}% (trial vote {:.2}%)",
        reps.case.label(),
        clf.name(),
        eval.accuracy,
        vote.accuracy
    );
    Ok(CaseResult {
        case: reps.case,
        classifier: clf.name().to_string(),
        representation_length: rep_len,
        windows: rep_len / fcfg.window_size,
        feature_length: features.first().map_or(0, Vec::len),
        eval,
        trial_vote: vote,
        autoencoder: reps.autoencoder.clone(),
    })
}

/// What [`run_experiment`] should compute beyond the configured case.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentPlan {
    /// Cases to run; empty means just `config.case`.
    pub cases: Vec<CaseMode>,
    /// Extra classifiers evaluated on the same features as the configured one.
    pub extra_classifiers: Vec<ClassifierConfig>,
    pub window_sizes: Vec<usize>,
    pub hidden_sizes: Vec<usize>,
    /// Wavelet candidates scored on the training segments; empty skips it.
    pub wavelet_candidates: Vec<String>,
}

impl ExperimentPlan {
    /// All three cases, SVM plus LDA, both sweeps and all registered wavelets.
    pub fn full() -> Self {
        ExperimentPlan {
            cases: CaseMode::ALL.to_vec(),
            extra_classifiers: vec![ClassifierConfig::Lda(Default::default())],
            window_sizes: vec![125, 250, 375, 500, 750, 1000, 1250, 1500],
            hidden_sizes: vec![30, 50, 100],
            wavelet_candidates: registry_names().iter().map(|s| s.to_string()).collect(),
        }
    }
}

fn dedup_keep_order(sizes: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(sizes.len());
    for &s in sizes {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn window_sweep_rows(
    prepared: &Prepared,
    reps: &Representations,
    cfg: &RunConfig,
    sizes: &[usize],
    timings: &mut Vec<Timing>,
) -> Result<Vec<WindowSweepRow>> {
    let len = reps.vectors.first().map_or(0, Vec::len);
    if let Some(&s) = sizes.iter().find(|&&s| s == 0 || s > len) {
        return Err(Error::Config(format!("window size {s} is not in 1..={len}")));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let fcfg = FeatureConfig {
            window_size: size,
            ..cfg.features.clone()
        };
        let features = timed(timings, format!("features window {size}"), || feature_matrix(&reps.vectors, &fcfg))
            .map_err(Error::stage("features"))?;
        let (eval, _) = timed(timings, format!("classify window {size}"), || {
            classify_case(prepared, &features, &cfg.classifier)
        })
        .map_err(Error::stage("classify"))?;
        log::info!("window {size}: accuracy {:.2}%", eval.accuracy);
        rows.push(WindowSweepRow {
            window_size: size,
            windows: len / size,
            feature_length: features.first().map_or(0, Vec::len),
            accuracy: eval.accuracy,
        });
    }
    Ok(rows)
}

/// First training sample of every class, in class order.
fn hidden_sweep_subset(prepared: &Prepared) -> Vec<usize> {
    (1..=NUM_CLASSES as ClassId)
        .filter_map(|c| {
            prepared
                .partition
                .train
                .iter()
                .copied()
                .find(|&i| prepared.samples[i].label == c)
        })
        .collect()
}

fn hidden_sweep_rows(prepared: &Prepared, cfg: &RunConfig, sizes: &[usize]) -> Result<Vec<HiddenSweepRow>> {
    check_autoencoder_input(cfg, prepared.segment_len)?;
    let sizes = dedup_keep_order(sizes);
    if sizes.contains(&0) {
        return Err(Error::Config("hidden sizes must be at least 1".into()));
    }
    let subset = hidden_sweep_subset(prepared);
    let jobs: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&h| subset.iter().map(move |&i| (h, i)))
        .collect();
    jobs.par_iter()
        .map(|&(hidden, i)| {
            let ae_cfg = AutoencoderConfig {
                hidden_dim: hidden,
                ..sample_autoencoder_config(cfg, i)
            };
            let s = &prepared.samples[i];
            let ae = train_autoencoder(&s.signal, &ae_cfg)?;
            Ok(HiddenSweepRow {
                hidden,
                sample: s.origin.to_string(),
                final_cost: ae.final_cost,
                epochs: ae.epochs_run,
                converged: ae.converged,
                cost_history: ae.cost_history,
            })
        })
        .collect()
}

/// Runs the configured case end to end.
pub fn run_case(cfg: &RunConfig) -> Result<ExperimentReport> {
    run_experiment(cfg, &ExperimentPlan::default())
}

/// Runs `plan` with shared preprocessing, partition and autoencoders.
pub fn run_experiment(cfg: &RunConfig, plan: &ExperimentPlan) -> Result<ExperimentReport> {
    let prepared = prepare(cfg)?;
    let mut timings = prepared.timings.clone();

    let mut cases = if plan.cases.is_empty() { vec![cfg.case] } else { plan.cases.clone() };
    cases.sort();
    cases.dedup();
    let needs_weights = cases.contains(&CaseMode::Case3) || !plan.window_sizes.is_empty();
    let mut classifiers = vec![cfg.classifier.clone()];
    classifiers.extend(plan.extra_classifiers.iter().cloned());

    let weights = if needs_weights {
        Some(timed(&mut timings, "autoencoder", || representations(&prepared, cfg, CaseMode::Case3))?)
    } else {
        None
    };

    let mut results = Vec::new();
    for &case in &cases {
        let reps = match case {
            CaseMode::Case3 => weights.clone().expect("weights trained for case 3"),
            _ => representations(&prepared, cfg, case)?,
        };
        let fcfg = cfg.features_for(case, prepared.segment_len);
        let features = timed(&mut timings, format!("features case{}", case.number()), || {
            feature_matrix(&reps.vectors, &fcfg)
        })
        .map_err(Error::stage("features"))?;
        for clf in &classifiers {
            results.push(case_result(&prepared, &reps, &features, &fcfg, clf, &mut timings)?);
        }
    }

    let window_sweep = match &weights {
        Some(w) if !plan.window_sizes.is_empty() => {
            window_sweep_rows(&prepared, w, cfg, &plan.window_sizes, &mut timings)?
        }
        _ => Vec::new(),
    };
    let hidden_sweep = if plan.hidden_sizes.is_empty() {
        Vec::new()
    } else {
        timed(&mut timings, "hidden sweep", || hidden_sweep_rows(&prepared, cfg, &plan.hidden_sizes))
            .map_err(Error::stage("hidden sweep"))?
    };
    let wavelet_selection = if plan.wavelet_candidates.is_empty() {
        None
    } else {
        let signals: Vec<&[f64]> = prepared
            .partition
            .train
            .iter()
            .map(|&i| prepared.samples[i].signal.as_slice())
            .collect();
        let names: Vec<&str> = plan.wavelet_candidates.iter().map(String::as_str).collect();
        Some(
            timed(&mut timings, "wavelet selection", || Ok(select_wavelet(&signals, &names)?))
                .map_err(Error::stage("wavelet selection"))?,
        )
    };

    Ok(ExperimentReport {
        config: cfg.clone(),
        dataset: prepared.dataset.clone(),
        partition: prepared.partition_summary(),
        cases: results,
        window_sweep,
        hidden_sweep,
        wavelet_selection,
        timings,
    })
}

/// Case-3 accuracy per window size, with one shared partition and one set of
/// trained autoencoders.
pub fn sweep_window(cfg: &RunConfig, sizes: &[usize]) -> Result<Vec<WindowSweepRow>> {
    if sizes.is_empty() {
        return Err(Error::Config("no window sizes given".into()));
    }
    let prepared = prepare(cfg)?;
    let reps = representations(&prepared, cfg, CaseMode::Case3)?;
    let mut timings = Vec::new();
    window_sweep_rows(&prepared, &reps, cfg, sizes, &mut timings)
}

/// Cost histories per hidden size on one training sample of each class.
/// Duplicate sizes are dropped.
pub fn sweep_hidden(cfg: &RunConfig, sizes: &[usize]) -> Result<Vec<HiddenSweepRow>> {
    if sizes.is_empty() {
        return Err(Error::Config("no hidden sizes given".into()));
    }
    let prepared = prepare(cfg)?;
    hidden_sweep_rows(&prepared, cfg, sizes).map_err(Error::stage("hidden sweep"))
}
