use std::fs;
use std::path::{Path, PathBuf};

use adaptive_holdout::experiments::{
    run_experiment, ExperimentConfig, MechanismSpec, Series, SignalSpec,
};
use adaptive_holdout::mechanisms::NoiseKind;
use clap::Args;

use crate::util::{csv_line, unix_ms};
use crate::CliError;

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Training/holdout/fresh set size (the generated pool is 2n + n).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Attribute count.
    #[arg(long, default_value_t = 1000)]
    pub d: usize,
    /// Number of variables to select; repeatable.
    #[arg(long = "k", value_name = "K")]
    pub k: Vec<usize>,
    /// Repetitions to aggregate over.
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    /// Label signal: `none` or `biased:COUNT:BIAS`.
    #[arg(long, default_value = "none")]
    pub signal: String,
    /// Holdout access: `standard` or `thresholdout`.
    #[arg(long, default_value = "standard")]
    pub mechanism: String,
    /// Thresholdout threshold T.
    #[arg(long = "T", default_value_t = 0.04)]
    pub threshold: f64,
    /// Thresholdout noise rate.
    #[arg(long, default_value_t = 0.01)]
    pub tau: f64,
    /// Thresholdout overfitting budget; defaults to ceil(sqrt(n)).
    #[arg(long)]
    pub budget: Option<u64>,
    /// Noise distribution: `laplace` or `gaussian`.
    #[arg(long, default_value = "gaussian")]
    pub noise: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output CSV path; the manifest lands next to it.
    #[arg(long, default_value = "experiment.csv")]
    pub out: PathBuf,
}

fn parse_signal(s: &str) -> Result<SignalSpec, CliError> {
    if s == "none" {
        return Ok(SignalSpec::None);
    }
    if let Some(rest) = s.strip_prefix("biased:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() == 2 {
            let count = parts[0].parse().map_err(|_| CliError::usage("bad biased count"))?;
            let bias = parts[1].parse().map_err(|_| CliError::usage("bad biased bias"))?;
            return Ok(SignalSpec::Biased { count, bias });
        }
    }
    Err(CliError::usage(format!("--signal must be none or biased:COUNT:BIAS, got {s}")))
}

fn parse_noise(s: &str) -> Result<NoiseKind, CliError> {
    match s {
        "laplace" => Ok(NoiseKind::Laplace),
        "gaussian" => Ok(NoiseKind::Gaussian),
        other => Err(CliError::usage(format!("--noise must be laplace or gaussian, got {other}"))),
    }
}

pub fn run(args: &ExperimentArgs) -> Result<(), CliError> {
    let started = unix_ms();
    let signal = parse_signal(&args.signal)?;
    let noise = parse_noise(&args.noise)?;
    let mechanism = match args.mechanism.as_str() {
        "standard" => MechanismSpec::StandardHoldout,
        "thresholdout" => MechanismSpec::Thresholdout {
            threshold: args.threshold,
            sigma: args.tau,
            budget: args.budget,
            noise,
        },
        other => {
            return Err(CliError::usage(format!(
                "--mechanism must be standard or thresholdout, got {other}"
            )))
        }
    };
    let k_values =
        if args.k.is_empty() { vec![10, 50, 100, 200, 500] } else { args.k.clone() };
    let cfg = ExperimentConfig {
        n: args.n,
        d: args.d,
        k_values,
        repetitions: args.reps,
        signal,
        mechanism,
        seed: args.seed,
    };

    let result = crate::with_thread_cap(|| run_experiment(&cfg))?;

    let mut csv = csv_line(&[
        "k".into(),
        "series".into(),
        "mean".into(),
        "std".into(),
        "reps".into(),
    ]);
    for (ki, &k) in cfg.k_values.iter().enumerate() {
        for series in Series::ALL {
            let stats = result.stats(ki, series);
            csv.push_str(&csv_line(&[
                k.to_string(),
                series.name().into(),
                format!("{:.6}", stats.mean),
                format!("{:.6}", stats.std),
                cfg.repetitions.to_string(),
            ]));
        }
    }
    fs::write(&args.out, csv).map_err(|e| CliError::usage(format!("writing CSV: {e}")))?;

    let manifest = manifest_text(args, &cfg, started, unix_ms());
    let manifest_path = manifest_path(&args.out);
    fs::write(&manifest_path, manifest)
        .map_err(|e| CliError::usage(format!("writing manifest: {e}")))?;
    println!("wrote {} and {}", args.out.display(), manifest_path.display());
    Ok(())
}

pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest")
}

fn manifest_text(args: &ExperimentArgs, cfg: &ExperimentConfig, started: u128, finished: u128) -> String {
    let ks: Vec<String> = cfg.k_values.iter().map(ToString::to_string).collect();
    let budget = args.budget.map_or_else(|| "default".into(), |b| b.to_string());
    let threads = std::env::var("ADAPTIVE_HOLDOUT_THREADS").unwrap_or_else(|_| "0".into());
    let lines = [
        "subcommand=experiment".to_string(),
        format!("version={}", env!("CARGO_PKG_VERSION")),
        format!("n={}", args.n),
        format!("d={}", args.d),
        format!("k={}", ks.join(";")),
        format!("reps={}", args.reps),
        format!("signal={}", args.signal),
        format!("mechanism={}", args.mechanism),
        format!("T={}", args.threshold),
        format!("tau={}", args.tau),
        format!("budget={budget}"),
        format!("noise={}", args.noise),
        format!("seed={}", args.seed),
        format!("threads={threads}"),
        format!("out={}", args.out.display()),
        format!("started_unix_ms={started}"),
        format!("finished_unix_ms={finished}"),
    ];
    let mut text = String::new();
    for line in lines {
        text.push_str(&line);
        text.push('\n');
    }
    text
}
