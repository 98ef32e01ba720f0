//! The two-step correlation-selection classifier and its validators.
//!
//! Correlations are normalized, `w_i = (1/n) sum x_i y`, so the selection
//! cutoff `1/sqrt(n)` is one standard deviation of a null correlation.
//! Thresholdout validation sees correlations rescaled into [0,1] as
//! `clip(x_i y, -C, C) / (2C) + 1/2` with `C = 4`.

use crate::error::{Error, Result};
use crate::mechanisms::{Answer, Thresholdout};

use super::data::LabeledDataset;

/// Clip bound applied to per-example correlation terms before rescaling;
/// about four standard deviations, so the clip is essentially never active.
pub const CORRELATION_CLIP: f64 = 4.0;

/// Map a clipped correlation to the [0,1] query scale.
pub fn rescale_correlation(clipped: f64) -> f64 {
    clipped / (2.0 * CORRELATION_CLIP) + 0.5
}

/// Invert [`rescale_correlation`].
pub fn unscale_correlation(answer: f64) -> f64 {
    (answer - 0.5) * 2.0 * CORRELATION_CLIP
}

/// Per-attribute correlation statistics of one row subset.
#[derive(Debug, Clone)]
pub struct CorrelationStats {
    /// Normalized correlations `(1/n) sum x_i y`.
    pub w: Vec<f64>,
    /// Same with each term clipped to `[-C, C]`.
    pub clipped: Vec<f64>,
}

/// Compute correlations of every column with the label over `rows`
/// (`None` = all rows).
pub fn correlations(data: &LabeledDataset, rows: Option<&[u32]>) -> CorrelationStats {
    let (_, d) = data.dims();
    let labels = data.labels();
    let mut w = Vec::with_capacity(d);
    let mut clipped = Vec::with_capacity(d);
    let mut buf = Vec::new();
    let count = rows.map_or(data.len(), <[u32]>::len) as f64;
    for j in 0..d {
        data.column_into(j, &mut buf);
        let (mut raw, mut clip) = (0.0, 0.0);
        let mut add = |x: f64, y: f64| {
            let term = x * y;
            raw += term;
            clip += term.clamp(-CORRELATION_CLIP, CORRELATION_CLIP);
        };
        match rows {
            None => {
                for (x, &y) in buf.iter().zip(labels) {
                    add(*x, y);
                }
            }
            Some(idx) => {
                for &r in idx {
                    add(buf[r as usize], labels[r as usize]);
                }
            }
        }
        w.push(raw / count);
        clipped.push(clip / count);
    }
    CorrelationStats { w, clipped }
}

/// Correlations of every column over both halves of a row partition in a
/// single column sweep; the full-scale run regenerates each column once
/// instead of twice. Every row not in `rows_a` is counted toward `rows_b`.
pub fn correlations_split(
    data: &LabeledDataset,
    rows_a: &[u32],
    rows_b: &[u32],
) -> (CorrelationStats, CorrelationStats) {
    let (n, d) = data.dims();
    let labels = data.labels();
    let mut in_a = vec![false; n];
    for &r in rows_a {
        in_a[r as usize] = true;
    }
    let (ca, cb) = (rows_a.len() as f64, rows_b.len() as f64);
    let mut a = CorrelationStats { w: Vec::with_capacity(d), clipped: Vec::with_capacity(d) };
    let mut b = CorrelationStats { w: Vec::with_capacity(d), clipped: Vec::with_capacity(d) };
    let mut buf = Vec::new();
    for j in 0..d {
        data.column_into(j, &mut buf);
        let (mut raw_a, mut clip_a, mut raw_b, mut clip_b) = (0.0, 0.0, 0.0, 0.0);
        for (i, (&x, &y)) in buf.iter().zip(labels).enumerate() {
            let term = x * y;
            let clipped = term.clamp(-CORRELATION_CLIP, CORRELATION_CLIP);
            if in_a[i] {
                raw_a += term;
                clip_a += clipped;
            } else {
                raw_b += term;
                clip_b += clipped;
            }
        }
        a.w.push(raw_a / ca);
        a.clipped.push(clip_a / ca);
        b.w.push(raw_b / cb);
        b.clipped.push(clip_b / cb);
    }
    (a, b)
}

/// Supplies the holdout-side correlation estimate per attribute.
pub enum Validator<'a> {
    /// The standard holdout: exact holdout correlations.
    Exact(&'a [f64]),
    /// A Thresholdout session answering the rescaled correlation queries.
    /// Attributes below the training cutoff are not queried; a `Bottom`
    /// answer leaves the attribute unverified (estimate 0, never selected).
    Thresholdout {
        session: &'a mut Thresholdout,
        train_clipped: &'a [f64],
        holdout_clipped: &'a [f64],
    },
}

/// Linear threshold classifier over the selected attributes:
/// `f(x) = sgn(sum_{i in V_k} sgn(w_i^t) x_i)`, with 0 mapped to +1.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSignClassifier {
    /// Selected attribute indices, in selection order (descending |w_t|).
    pub selected: Vec<usize>,
    /// Matching signs, each +1 or -1.
    pub signs: Vec<f64>,
}

impl LinearSignClassifier {
    pub fn classify(&self, x: &[f64]) -> f64 {
        let margin: f64 =
            self.selected.iter().zip(&self.signs).map(|(&j, &s)| s * x[j]).sum();
        if margin >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Filter and rank attributes: keep those whose training and holdout
/// estimates agree in sign and both clear `1/sqrt(n)` in absolute value,
/// then take the `k` with largest `|w_t|` (ties to the lower index).
/// Returns all survivors when fewer than `k` pass.
pub fn select_from_correlations(
    w_train: &[f64],
    w_holdout: &[f64],
    n: usize,
    k: usize,
) -> LinearSignClassifier {
    let cutoff = 1.0 / (n as f64).sqrt();
    let mut members: Vec<usize> = (0..w_train.len())
        .filter(|&j| {
            w_train[j] * w_holdout[j] > 0.0
                && w_train[j].abs() >= cutoff
                && w_holdout[j].abs() >= cutoff
        })
        .collect();
    // stable sort on descending |w_t| keeps lower indices first on ties
    members.sort_by(|&a, &b| w_train[b].abs().partial_cmp(&w_train[a].abs()).unwrap());
    members.truncate(k);
    let signs = members.iter().map(|&j| if w_train[j] >= 0.0 { 1.0 } else { -1.0 }).collect();
    LinearSignClassifier { selected: members, signs }
}

/// Full selection step: training correlations plus a validator for the
/// holdout side.
pub fn select_variables(
    w_train: &[f64],
    validator: Validator<'_>,
    n: usize,
    k: usize,
) -> Result<LinearSignClassifier> {
    if k > w_train.len() {
        return Err(Error::InvalidParameter(format!(
            "k={k} exceeds attribute count {}",
            w_train.len()
        )));
    }
    match validator {
        Validator::Exact(w_h) => Ok(select_from_correlations(w_train, w_h, n, k)),
        Validator::Thresholdout { session, train_clipped, holdout_clipped } => {
            let cutoff = 1.0 / (n as f64).sqrt();
            let mut w_hat = vec![0.0; w_train.len()];
            for j in 0..w_train.len() {
                if w_train[j].abs() < cutoff {
                    continue;
                }
                let e_train = rescale_correlation(train_clipped[j]);
                let e_hold = rescale_correlation(holdout_clipped[j]);
                if let Answer::Value(a) = session.answer_means(e_train, e_hold)? {
                    w_hat[j] = unscale_correlation(a);
                }
            }
            Ok(select_from_correlations(w_train, &w_hat, n, k))
        }
    }
}

/// Fraction of examples the classifier labels correctly. The margin is
/// accumulated column by column in selection order, which matches the
/// per-row sum of [`LinearSignClassifier::classify`] bit-exactly.
pub fn accuracy(
    classifier: &LinearSignClassifier,
    data: &LabeledDataset,
    rows: Option<&[u32]>,
) -> Result<f64> {
    let count = rows.map_or(data.len(), <[u32]>::len);
    if count == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut margins = vec![0.0f64; count];
    let mut buf = Vec::new();
    for (&j, &s) in classifier.selected.iter().zip(&classifier.signs) {
        data.column_into(j, &mut buf);
        match rows {
            None => {
                for (m, x) in margins.iter_mut().zip(&buf) {
                    *m += s * x;
                }
            }
            Some(idx) => {
                for (m, &r) in margins.iter_mut().zip(idx) {
                    *m += s * buf[r as usize];
                }
            }
        }
    }
    let labels = data.labels();
    let correct = margins
        .iter()
        .enumerate()
        .filter(|&(i, &m)| {
            let y = match rows {
                None => labels[i],
                Some(idx) => labels[idx[i] as usize],
            };
            (if m >= 0.0 { 1.0 } else { -1.0 }) == y
        })
        .count();
    Ok(correct as f64 / count as f64)
}
