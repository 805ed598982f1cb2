use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wspace::classify::{ClassifierConfig, LdaParams, SvmParams};
use wspace::dataset::{load_dataset, save_dataset, segment_trials};
use wspace::pipeline::{
    emit_report, generate_synthetic, load_report, run_experiment, sweep_hidden, sweep_window, CaseMode, DataSource,
    ExperimentPlan, ExperimentReport, RunConfig, SyntheticSpec, OUTPUT_DIR_ENV,
};
use wspace::wavelets::{registry_names, select_wavelet};
use wspace::{Error, Result};

#[derive(Parser)]
#[command(name = "wspace", version, about = "Autoencoder weight-space features for motor-imagery EEG")]
struct Cli {
    /// JSON run configuration; unspecified fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports.
    #[arg(long, global = true, env = OUTPUT_DIR_ENV)]
    output_dir: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct DataArgs {
    /// Dataset manifest; overrides the configured data source.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Autoencoder hidden size.
    #[arg(long)]
    hidden: Option<usize>,
    /// Autoencoder epoch cap.
    #[arg(long)]
    max_epochs: Option<usize>,
    /// Skip wavelet denoising.
    #[arg(long)]
    no_preprocess: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifierArg {
    Svm,
    Lda,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic four-class data set as manifest plus raw trial files.
    GenSynthetic {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trials_per_class: Option<usize>,
        #[arg(long)]
        channels: Option<usize>,
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Load and validate a data set and print its summary.
    IngestCheck { manifest: PathBuf },
    /// Rank wavelets by mean maximal cross-correlation with the segments.
    SelectWavelet {
        #[command(flatten)]
        data: DataArgs,
        /// Comma-separated candidates (default: all registered wavelets).
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
    },
    /// Run one or more cases end to end and write the report.
    Run {
        #[command(flatten)]
        data: DataArgs,
        /// Case mode 1, 2 or 3; repeat to run several on shared data.
        #[arg(long = "case", value_parser = clap::value_parser!(u8).range(1..=3))]
        cases: Vec<u8>,
        #[arg(long, value_enum)]
        classifier: Option<ClassifierArg>,
        /// Also evaluate LDA on the same features.
        #[arg(long)]
        compare_lda: bool,
    },
    /// Case-3 accuracy per feature window size.
    SweepWindow {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [125, 250, 375, 500, 750, 1000, 1250, 1500])]
        sizes: Vec<usize>,
    },
    /// Autoencoder cost curves per hidden size.
    SweepHidden {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [30, 50, 100])]
        sizes: Vec<usize>,
    },
    /// Run every case, both classifiers and both sweeps, or re-emit a saved report.
    Report {
        #[command(flatten)]
        data: DataArgs,
        /// Existing report.json to re-emit instead of running.
        #[arg(long)]
        from: Option<PathBuf>,
    },
}

fn base_config(cli: &Cli, data: &DataArgs) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_json_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = &cli.output_dir {
        cfg.output_dir = dir.clone();
    }
    if let Some(m) = &data.manifest {
        cfg.data = DataSource::Manifest { path: m.clone() };
    }
    if let Some(s) = data.seed {
        cfg.seed = s;
    }
    if let Some(h) = data.hidden {
        cfg.autoencoder.hidden_dim = h;
    }
    if let Some(e) = data.max_epochs {
        cfg.autoencoder.max_epochs = e;
    }
    if data.no_preprocess {
        cfg.preprocess = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_report(r: &ExperimentReport, dir: &Path) -> Result<()> {
    for p in emit_report(r, dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::GenSynthetic {
            out,
            trials_per_class,
            channels,
            noise,
            seed,
        } => {
            let mut spec = match &cli.config {
                Some(p) => match RunConfig::from_json_file(p)?.data {
                    DataSource::Synthetic(s) => s,
                    DataSource::Manifest { .. } => SyntheticSpec::default(),
                },
                None => SyntheticSpec::default(),
            };
            if let Some(v) = trials_per_class {
                spec.trials_per_class = *v;
            }
            if let Some(v) = channels {
                spec.channels = *v;
            }
            if let Some(v) = noise {
                spec.noise_level = *v;
            }
            if let Some(v) = seed {
                spec.seed = *v;
            }
            let ts = generate_synthetic(&spec).map_err(|e| Error::Config(e.to_string()))?;
            let manifest = save_dataset(&ts, out)?;
            println!("{}", manifest.display());
        }
        Command::IngestCheck { manifest } => {
            let ts = load_dataset(manifest)?;
            let mut per_class = [0usize; 4];
            for t in &ts.trials {
                per_class[t.label as usize - 1] += 1;
            }
            let summary = serde_json::json!({
                "subject_id": ts.subject_id,
                "sample_rate_hz": ts.sample_rate_hz,
                "class_names": ts.class_names,
                "trials": ts.trials.len(),
                "trials_per_class": per_class,
                "channels": ts.channels(),
                "samples_per_trial": ts.samples_per_trial(),
            });
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
        }
        Command::SelectWavelet { data, candidates } => {
            let cfg = base_config(cli, data)?;
            let ts = match &cfg.data {
                DataSource::Synthetic(s) => generate_synthetic(s).map_err(|e| Error::Config(e.to_string()))?,
                DataSource::Manifest { path } => load_dataset(path)?,
            };
            let ts = wspace::pipeline::preprocess(&ts, cfg.preprocess)?;
            let samples = segment_trials(&ts, cfg.segment_start_s, cfg.segment_end_s)?;
            let signals: Vec<&[f64]> = samples.iter().map(|s| s.signal.as_slice()).collect();
            let names: Vec<&str> = if candidates.is_empty() {
                registry_names().to_vec()
            } else {
                candidates.iter().map(String::as_str).collect()
            };
            let sel = select_wavelet(&signals, &names)?;
            std::fs::create_dir_all(&cfg.output_dir).map_err(Error::io(&cfg.output_dir))?;
            let path = cfg.output_dir.join("table2.csv");
            let mut text = String::from("wavelet,xcorr\n");
            for s in &sel.ranking {
                text.push_str(&format!("{},{:.4}\n", s.name, s.mean_xcorr));
            }
            std::fs::write(&path, &text).map_err(Error::io(&path))?;
            print!("{text}");
            if sel.skipped_constant > 0 {
                eprintln!("skipped {} constant segments", sel.skipped_constant);
            }
        }
        Command::Run {
            data,
            cases,
            classifier,
            compare_lda,
        } => {
            let mut cfg = base_config(cli, data)?;
            match classifier {
                Some(ClassifierArg::Svm) => cfg.classifier = ClassifierConfig::Svm(SvmParams::default()),
                Some(ClassifierArg::Lda) => cfg.classifier = ClassifierConfig::Lda(LdaParams::default()),
                None => {}
            }
            let cases: Vec<CaseMode> = cases.iter().filter_map(|&n| CaseMode::from_number(n)).collect();
            if let Some(&first) = cases.first() {
                cfg.case = first;
            }
            let mut plan = ExperimentPlan {
                cases,
                ..ExperimentPlan::default()
            };
            if *compare_lda && cfg.classifier.name() != "lda" {
                plan.extra_classifiers.push(ClassifierConfig::Lda(LdaParams::default()));
            }
            let report = run_experiment(&cfg, &plan)?;
            for c in &report.cases {
                println!("{} {}: accuracy {:.2}%", c.case.label(), c.classifier, c.eval.accuracy);
            }
            write_report(&report, &cfg.output_dir)?;
        }
        Command::SweepWindow { data, sizes } => {
            let cfg = base_config(cli, data)?;
            let rows = sweep_window(&cfg, sizes)?;
            std::fs::create_dir_all(&cfg.output_dir).map_err(Error::io(&cfg.output_dir))?;
            let path = cfg.output_dir.join("fig4.csv");
            let mut text = String::from("window_size,classification_accuracy_pct\n");
            for r in &rows {
                text.push_str(&format!("{},{:.2}\n", r.window_size, r.accuracy));
            }
            std::fs::write(&path, &text).map_err(Error::io(&path))?;
            print!("{text}");
        }
        Command::SweepHidden { data, sizes } => {
            let cfg = base_config(cli, data)?;
            let rows = sweep_hidden(&cfg, sizes)?;
            std::fs::create_dir_all(&cfg.output_dir).map_err(Error::io(&cfg.output_dir))?;
            let path = cfg.output_dir.join("fig3.csv");
            let mut text = String::from("hidden,sample,epoch,cost\n");
            for r in &rows {
                for (e, c) in r.cost_history.iter().enumerate() {
                    text.push_str(&format!("{},{},{},{:e}\n", r.hidden, r.sample, e, c));
                }
                println!("hidden {} sample {}: final cost {:.6e} after {} epochs", r.hidden, r.sample, r.final_cost, r.epochs);
            }
            std::fs::write(&path, &text).map_err(Error::io(&path))?;
        }
        Command::Report { data, from } => match from {
            Some(path) => {
                let report = load_report(path)?;
                let dir = match &cli.output_dir {
                    Some(d) => d.clone(),
                    None => path.parent().map(Path::to_path_buf).unwrap_or_default(),
                };
                write_report(&report, &dir)?;
            }
            None => {
                let cfg = base_config(cli, data)?;
                let report = run_experiment(&cfg, &ExperimentPlan::full())?;
                write_report(&report, &cfg.output_dir)?;
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: could not configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
