use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CaseMode, RunConfig};
use crate::autoenc::TrainedAutoencoder;
use crate::classify::EvalReport;
use crate::dataset::{SampleRecord, NUM_CLASSES};
use crate::wavelets::WaveletSelection;
use crate::{Error, Result};

/// Published average accuracies of other methods on BCI-IV IIa, reported
/// next to the measured accuracy. Never recomputed.
pub const LITERATURE_ROWS: [(&str, &str); 3] = [
    ("Mahamune et al.", "71.25"),
    ("Zhang et al.", "84.96"),
    ("Ma et al.", "96.26"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub subject_id: String,
    pub trials: usize,
    pub channels: usize,
    pub samples_per_trial: usize,
    pub sample_rate_hz: f64,
    pub segments: usize,
    pub segment_length: usize,
    pub preprocessed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub train: usize,
    pub test: usize,
    pub holdout_p: f64,
    pub seed: u64,
    pub train_per_class: [usize; NUM_CLASSES],
    pub test_per_class: [usize; NUM_CLASSES],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoencoderSummary {
    pub trained: usize,
    pub converged: usize,
    pub mean_final_cost: f64,
    pub max_final_cost: f64,
    pub mean_epochs: f64,
    pub mean_relative_error: f64,
    pub cost_histories_non_increasing: bool,
}

impl AutoencoderSummary {
    pub fn from_models(models: &[TrainedAutoencoder], samples: &[SampleRecord]) -> Self {
        let n = models.len().max(1) as f64;
        let rel: f64 = models
            .iter()
            .zip(samples)
            .map(|(m, s)| m.relative_reconstruction_error(&s.signal).unwrap_or(f64::NAN))
            .sum();
        AutoencoderSummary {
            trained: models.len(),
            converged: models.iter().filter(|m| m.converged).count(),
            mean_final_cost: models.iter().map(|m| m.final_cost).sum::<f64>() / n,
            max_final_cost: models.iter().map(|m| m.final_cost).fold(0.0, f64::max),
            mean_epochs: models.iter().map(|m| m.epochs_run as f64).sum::<f64>() / n,
            mean_relative_error: rel / n,
            cost_histories_non_increasing: models
                .iter()
                .all(|m| m.cost_history.windows(2).all(|w| w[1] <= w[0])),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub case: CaseMode,
    pub classifier: String,
    pub representation_length: usize,
    pub windows: usize,
    pub feature_length: usize,
    pub eval: EvalReport,
    /// Channel predictions of each test trial combined by majority vote.
    pub trial_vote: EvalReport,
    pub autoencoder: Option<AutoencoderSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSweepRow {
    pub window_size: usize,
    pub windows: usize,
    pub feature_length: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HiddenSweepRow {
    pub hidden: usize,
    pub sample: String,
    pub final_cost: f64,
    pub epochs: usize,
    pub converged: bool,
    pub cost_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

/// Everything a run produced. Wall-clock timings are kept out of the JSON so
/// that identical runs serialize identically; they go to `timings.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: RunConfig,
    pub dataset: DatasetSummary,
    pub partition: PartitionSummary,
    pub cases: Vec<CaseResult>,
    pub window_sweep: Vec<WindowSweepRow>,
    pub hidden_sweep: Vec<HiddenSweepRow>,
    pub wavelet_selection: Option<WaveletSelection>,
    #[serde(skip)]
    pub timings: Vec<Timing>,
}

impl ExperimentReport {
    /// The result of the configured case and classifier, if it was run.
    pub fn primary(&self) -> Option<&CaseResult> {
        let clf = self.config.classifier.name();
        self.cases
            .iter()
            .find(|c| c.case == self.config.case && c.classifier == clf)
            .or_else(|| self.cases.iter().rev().find(|c| c.classifier == clf))
            .or_else(|| self.cases.first())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn pct(v: f64) -> String {
    format!("{v:.2}")
}

fn opt_pct(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), pct)
}

fn write_csv(path: &Path, rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(Error::io(path))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let path = path.display().to_string();
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io { path, source },
        other => Error::Io {
            path,
            source: std::io::Error::other(format!("{other:?}")),
        },
    }
}

fn row<I: IntoIterator<Item = S>, S: Into<String>>(cells: I) -> Vec<String> {
    cells.into_iter().map(Into::into).collect()
}

fn table2(sel: &WaveletSelection) -> Vec<Vec<String>> {
    let mut rows = vec![row(["wavelet", "xcorr"])];
    for s in &sel.ranking {
        rows.push(vec![s.name.clone(), format!("{:.4}", s.mean_xcorr)]);
    }
    rows
}

fn table3(r: &ExperimentReport) -> Vec<Vec<String>> {
    let clf = r.config.classifier.name();
    let mut rows = vec![row(["method", "classification_accuracy_pct"])];
    for c in r.cases.iter().filter(|c| c.classifier == clf) {
        rows.push(vec![c.case.label().to_string(), pct(c.eval.accuracy)]);
    }
    rows
}

/// Per-class rates for every classifier evaluated on the highest case run.
fn table4(r: &ExperimentReport) -> Vec<Vec<String>> {
    let mut rows = vec![row(["classifier", "metric", "class_1", "class_2", "class_3", "class_4", "mean"])];
    let Some(top) = r.cases.iter().map(|c| c.case).max() else {
        return rows;
    };
    for c in r.cases.iter().filter(|c| c.case == top) {
        let e = &c.eval;
        for (name, vals, mean) in [
            ("sensitivity", &e.sensitivity, e.mean_sensitivity),
            ("specificity", &e.specificity, e.mean_specificity),
            ("precision", &e.precision, e.mean_precision),
        ] {
            let mut line = vec![c.classifier.clone(), name.to_string()];
            line.extend(vals.iter().map(|v| opt_pct(*v)));
            line.push(opt_pct(mean));
            rows.push(line);
        }
        rows.push(row([
            c.classifier.clone(),
            "model_accuracy".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            pct(e.accuracy),
        ]));
    }
    rows
}

fn table5(r: &ExperimentReport) -> Vec<Vec<String>> {
    let mut rows = vec![row(["subject", "classification_accuracy_pct", "average_accuracy_pct"])];
    if let Some(p) = r.primary() {
        rows.push(vec![r.dataset.subject_id.clone(), pct(p.eval.accuracy), pct(p.eval.accuracy)]);
    }
    rows
}

fn table6(r: &ExperimentReport) -> Vec<Vec<String>> {
    let mut header = vec!["performance".to_string()];
    let mut values = vec!["average_accuracy_pct".to_string()];
    for (name, acc) in LITERATURE_ROWS {
        header.push(name.to_string());
        values.push(acc.to_string());
    }
    header.push("this run".to_string());
    values.push(r.primary().map_or_else(|| "NA".to_string(), |p| pct(p.eval.accuracy)));
    vec![header, values]
}

fn fig3(r: &ExperimentReport) -> Vec<Vec<String>> {
    let mut rows = vec![row(["hidden", "sample", "epoch", "cost"])];
    for h in &r.hidden_sweep {
        for (epoch, cost) in h.cost_history.iter().enumerate() {
            rows.push(vec![h.hidden.to_string(), h.sample.clone(), epoch.to_string(), format!("{cost:e}")]);
        }
    }
    rows
}

fn fig4(r: &ExperimentReport) -> Vec<Vec<String>> {
    let mut rows = vec![row(["window_size", "classification_accuracy_pct"])];
    for w in &r.window_sweep {
        rows.push(vec![w.window_size.to_string(), pct(w.accuracy)]);
    }
    rows
}

/// Writes `report.json`, the table CSVs, the figure series and `timings.csv`
/// into `dir`. Returns the written paths. Apart from `timings.csv`, the output
/// is a pure function of the report.
pub fn emit_report(r: &ExperimentReport, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
    let mut written = Vec::new();
    let json = dir.join("report.json");
    std::fs::write(&json, r.to_json()).map_err(Error::io(&json))?;
    written.push(json);

    let mut tables: Vec<(&str, Vec<Vec<String>>)> = Vec::new();
    if let Some(sel) = &r.wavelet_selection {
        tables.push(("table2.csv", table2(sel)));
    }
    tables.push(("table3.csv", table3(r)));
    tables.push(("table4.csv", table4(r)));
    tables.push(("table5.csv", table5(r)));
    tables.push(("table6.csv", table6(r)));
    if !r.hidden_sweep.is_empty() {
        tables.push(("fig3.csv", fig3(r)));
    }
    if !r.window_sweep.is_empty() {
        tables.push(("fig4.csv", fig4(r)));
    }
    let timings: Vec<Vec<String>> = std::iter::once(row(["stage", "seconds"]))
        .chain(r.timings.iter().map(|t| vec![t.stage.clone(), format!("{:.3}", t.seconds)]))
        .collect();
    tables.push(("timings.csv", timings));

    for (name, rows) in tables {
        let path = dir.join(name);
        write_csv(&path, &rows)?;
        written.push(path);
    }
    Ok(written)
}

/// Reads a `report.json` written by [`emit_report`].
pub fn load_report(path: impl AsRef<Path>) -> Result<ExperimentReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::evaluate;
    use crate::pipeline::SyntheticSpec;

    fn sample_report() -> ExperimentReport {
        let eval = evaluate(&[1, 2, 3, 4, 1, 2], &[1, 2, 3, 4, 2, 2]).unwrap();
        let case = |case, classifier: &str| CaseResult {
            case,
            classifier: classifier.into(),
            representation_length: 750,
            windows: 3,
            feature_length: 72,
            eval: eval.clone(),
            trial_vote: eval.clone(),
            autoencoder: None,
        };
        ExperimentReport {
            config: RunConfig {
                data: super::super::DataSource::Synthetic(SyntheticSpec::default()),
                ..RunConfig::default()
            },
            dataset: DatasetSummary {
                subject_id: "s1".into(),
                trials: 2,
                channels: 3,
                samples_per_trial: 1750,
                sample_rate_hz: 250.0,
                segments: 6,
                segment_length: 750,
                preprocessed: true,
            },
            partition: PartitionSummary {
                train: 4,
                test: 2,
                holdout_p: 0.3,
                seed: 7,
                train_per_class: [1; 4],
                test_per_class: [1, 1, 0, 0],
            },
            cases: vec![case(CaseMode::Case1, "svm"), case(CaseMode::Case3, "svm"), case(CaseMode::Case3, "lda")],
            window_sweep: vec![WindowSweepRow {
                window_size: 250,
                windows: 150,
                feature_length: 3600,
                accuracy: 90.0,
            }],
            hidden_sweep: vec![HiddenSweepRow {
                hidden: 30,
                sample: "t0:0".into(),
                final_cost: 0.1,
                epochs: 2,
                converged: false,
                cost_history: vec![1.0, 0.5, 0.1],
            }],
            wavelet_selection: Some(WaveletSelection {
                ranking: vec![crate::wavelets::WaveletScore {
                    name: "db4".into(),
                    mean_xcorr: 0.25,
                }],
                skipped_constant: 0,
            }),
            timings: vec![Timing {
                stage: "load".into(),
                seconds: 0.5,
            }],
        }
    }

    #[test]
    fn files_exist_and_have_table_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let r = sample_report();
        emit_report(&r, dir.path()).unwrap();
        let read = |n: &str| std::fs::read_to_string(dir.path().join(n)).unwrap();
        assert_eq!(read("table6.csv").lines().nth(1).unwrap(), "average_accuracy_pct,71.25,84.96,96.26,83.33");
        let t4 = read("table4.csv");
        assert_eq!(t4.lines().count(), 1 + 2 * 4);
        assert!(t4.lines().nth(4).unwrap().starts_with("svm,model_accuracy,,,,,83.33"));
        assert_eq!(read("table3.csv"), "method,classification_accuracy_pct\nCase-1,83.33\nCase-3,83.33\n");
        assert_eq!(read("fig3.csv").lines().count(), 4);
        assert!(read("table2.csv").contains("db4,0.2500"));
        let back = load_report(dir.path().join("report.json")).unwrap();
        assert_eq!(back.cases, r.cases);
        assert!(back.timings.is_empty());
    }

    #[test]
    fn re_emission_is_byte_identical() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let r = sample_report();
        let files = emit_report(&r, a.path()).unwrap();
        emit_report(&r, b.path()).unwrap();
        for f in files {
            let name = f.file_name().unwrap();
            assert_eq!(std::fs::read(&f).unwrap(), std::fs::read(b.path().join(name)).unwrap());
        }
    }
}
