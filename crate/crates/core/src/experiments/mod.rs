//! The synthetic variable-selection overfitting study: generate data, select
//! variables against a holdout (standard or Thresholdout-mediated), build the
//! sign classifier, and aggregate accuracies over repetitions.

mod data;
mod select;

pub use data::{generate_dataset, split_rows, LabeledDataset, SignalSpec};
pub use select::{
    accuracy, correlations, correlations_split, rescale_correlation, select_from_correlations,
    select_variables, unscale_correlation, CorrelationStats, LinearSignClassifier, Validator,
    CORRELATION_CLIP,
};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mechanisms::{Answer, NoiseKind, NoiseSource, Thresholdout, ThresholdoutConfig};
use crate::seed;

/// How holdout estimates reach the analyst.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MechanismSpec {
    /// Direct reuse of the holdout set.
    StandardHoldout,
    /// Thresholdout with the given threshold and noise rate. `budget`
    /// defaults to `ceil(sqrt(n))` when unset.
    Thresholdout { threshold: f64, sigma: f64, budget: Option<u64>, noise: NoiseKind },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Training and holdout sets each get `n` examples; the fresh
    /// evaluation set too.
    pub n: usize,
    pub d: usize,
    pub k_values: Vec<usize>,
    pub repetitions: usize,
    pub signal: SignalSpec,
    pub mechanism: MechanismSpec,
    pub seed: u64,
}

/// The four accuracy series recorded per `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Series {
    Train,
    HoldoutReported,
    Fresh,
    HoldoutTrue,
}

impl Series {
    pub const ALL: [Series; 4] =
        [Series::Train, Series::HoldoutReported, Series::Fresh, Series::HoldoutTrue];

    pub fn name(self) -> &'static str {
        match self {
            Series::Train => "train",
            Series::HoldoutReported => "holdout_reported",
            Series::Fresh => "fresh",
            Series::HoldoutTrue => "holdout_true",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesStats {
    pub mean: f64,
    /// Sample standard deviation over repetitions (0 for a single rep).
    pub std: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub k_values: Vec<usize>,
    pub repetitions: usize,
    cells: Vec<[SeriesStats; 4]>,
    per_rep: Vec<Vec<[f64; 4]>>,
}

impl ExperimentResult {
    pub fn stats(&self, k_index: usize, series: Series) -> SeriesStats {
        self.cells[k_index][series_slot(series)]
    }

    /// Raw per-repetition values for one `(k, series)` cell.
    pub fn values(&self, k_index: usize, series: Series) -> Vec<f64> {
        self.per_rep.iter().map(|rep| rep[k_index][series_slot(series)]).collect()
    }
}

fn series_slot(series: Series) -> usize {
    match series {
        Series::Train => 0,
        Series::HoldoutReported => 1,
        Series::Fresh => 2,
        Series::HoldoutTrue => 3,
    }
}

fn validate(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.n == 0 || cfg.d == 0 {
        return Err(Error::InvalidParameter("n and d must be >= 1".into()));
    }
    if cfg.repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be >= 1".into()));
    }
    if cfg.k_values.is_empty() {
        return Err(Error::InvalidParameter("at least one k value is required".into()));
    }
    if let Some(&k) = cfg.k_values.iter().find(|&&k| k > cfg.d) {
        return Err(Error::InvalidParameter(format!("k={k} exceeds d={}", cfg.d)));
    }
    if let SignalSpec::Biased { count, .. } = cfg.signal {
        if count > cfg.d {
            return Err(Error::InvalidParameter(format!(
                "biased column count {count} exceeds d={}",
                cfg.d
            )));
        }
    }
    if let MechanismSpec::Thresholdout { threshold, sigma, .. } = cfg.mechanism {
        ThresholdoutConfig::new(threshold, sigma, 0, NoiseSource::none())?;
    }
    Ok(())
}

/// One repetition: returns `[train, holdout_reported, fresh, holdout_true]`
/// per k value. Thresholdout `Bottom` answers surface as NaN in the
/// reported series.
fn run_repetition(cfg: &ExperimentConfig, rep: u64) -> Result<Vec<[f64; 4]>> {
    let data = LabeledDataset::generate(
        2 * cfg.n,
        cfg.d,
        cfg.signal,
        seed::derive(cfg.seed, "rep-data", rep),
    )?;
    let fresh = LabeledDataset::generate(
        cfg.n,
        cfg.d,
        cfg.signal,
        seed::derive(cfg.seed, "rep-fresh", rep),
    )?;
    let (rows_t, rows_h) = split_rows(2 * cfg.n, seed::derive(cfg.seed, "rep-split", rep));

    let (train_stats, holdout_stats) = correlations_split(&data, &rows_t, &rows_h);

    let mut session = match cfg.mechanism {
        MechanismSpec::StandardHoldout => None,
        MechanismSpec::Thresholdout { threshold, sigma, budget, noise } => {
            let b = budget.unwrap_or_else(|| (cfg.n as f64).sqrt().ceil() as u64);
            let src = NoiseSource::new(noise, seed::derive(cfg.seed, "rep-noise", rep));
            Some(Thresholdout::new(ThresholdoutConfig::new(threshold, sigma, b, src)?)?)
        }
    };

    let mut out = Vec::with_capacity(cfg.k_values.len());
    for &k in &cfg.k_values {
        let classifier = match session.as_mut() {
            None => select_variables(
                &train_stats.w,
                Validator::Exact(&holdout_stats.w),
                cfg.n,
                k,
            )?,
            Some(tho) => select_variables(
                &train_stats.w,
                Validator::Thresholdout {
                    session: tho,
                    train_clipped: &train_stats.clipped,
                    holdout_clipped: &holdout_stats.clipped,
                },
                cfg.n,
                k,
            )?,
        };
        let a_train = accuracy(&classifier, &data, Some(&rows_t))?;
        let a_hold = accuracy(&classifier, &data, Some(&rows_h))?;
        let a_fresh = accuracy(&classifier, &fresh, None)?;
        let a_reported = match session.as_mut() {
            None => a_hold,
            Some(tho) => match tho.answer_means(a_train, a_hold)? {
                Answer::Value(v) => v.clamp(0.0, 1.0),
                Answer::Bottom => f64::NAN,
            },
        };
        out.push([a_train, a_reported, a_fresh, a_hold]);
    }
    Ok(out)
}

/// Run the full study. Repetitions execute in parallel on disjoint derived
/// seeds; aggregation is a fixed-order reduction, so the result does not
/// depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    validate(cfg)?;
    let per_rep: Vec<Vec<[f64; 4]>> = (0..cfg.repetitions as u64)
        .into_par_iter()
        .map(|rep| run_repetition(cfg, rep))
        .collect::<Result<_>>()?;

    let reps = cfg.repetitions as f64;
    let cells = (0..cfg.k_values.len())
        .map(|ki| {
            let mut out = [SeriesStats { mean: 0.0, std: 0.0 }; 4];
            for slot in 0..4 {
                let mean = per_rep.iter().map(|r| r[ki][slot]).sum::<f64>() / reps;
                let std = if cfg.repetitions > 1 {
                    let ss =
                        per_rep.iter().map(|r| (r[ki][slot] - mean).powi(2)).sum::<f64>();
                    (ss / (reps - 1.0)).sqrt()
                } else {
                    0.0
                };
                out[slot] = SeriesStats { mean, std };
            }
            out
        })
        .collect();

    Ok(ExperimentResult {
        k_values: cfg.k_values.clone(),
        repetitions: cfg.repetitions,
        cells,
        per_rep,
    })
}
