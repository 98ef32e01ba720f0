//! The Thresholdout reusable-holdout mechanism.
//!
//! Each query is answered from the training mean unless it deviates from the
//! holdout mean by more than a noisy threshold, in which case a noisy holdout
//! mean is released and one unit of the overfitting budget is consumed. Once
//! the budget is gone every answer is `Bottom`.

use crate::error::{Error, Result};
use crate::mechanisms::noise::NoiseSource;
use crate::mechanisms::query::{empirical_mean, StatisticalQuery};

/// An answer from Thresholdout. `Bottom` is a first-class refusal, not an
/// error; callers must handle it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Answer {
    Value(f64),
    Bottom,
}

impl Answer {
    pub fn value(self) -> Option<f64> {
        match self {
            Answer::Value(v) => Some(v),
            Answer::Bottom => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ThresholdoutConfig {
    /// Threshold T on the training/holdout gap, in [0, 1].
    pub threshold: f64,
    /// Noise rate sigma; the three internal draws use scales 4s, 2s, and s.
    pub sigma: f64,
    /// Overfitting budget B.
    pub budget: u64,
    /// Noise distribution and seed.
    pub noise: NoiseSource,
    /// Consume budget only when the training mean exceeds the holdout mean
    /// (signed comparison instead of absolute value).
    pub one_sided: bool,
}

impl ThresholdoutConfig {
    pub fn new(threshold: f64, sigma: f64, budget: u64, noise: NoiseSource) -> Result<Self> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::InvalidParameter(format!(
                "threshold must be in [0,1], got {threshold}"
            )));
        }
        if !(sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!("sigma must be >= 0, got {sigma}")));
        }
        Ok(Self { threshold, sigma, budget, noise, one_sided: false })
    }

    pub fn one_sided(mut self) -> Self {
        self.one_sided = true;
        self
    }
}

/// Live Thresholdout session state.
#[derive(Debug, Clone)]
pub struct Thresholdout {
    config: ThresholdoutConfig,
    noise: NoiseSource,
    remaining_budget: u64,
    noisy_threshold: f64,
    answers_given: u64,
}

impl Thresholdout {
    /// Initialize the session: draws the initial threshold perturbation
    /// gamma at scale `2 sigma` and sets `T_hat = T + gamma`.
    pub fn new(config: ThresholdoutConfig) -> Result<Self> {
        let mut noise = config.noise.clone();
        let gamma = noise.draw(2.0 * config.sigma)?;
        Ok(Self {
            noisy_threshold: config.threshold + gamma,
            remaining_budget: config.budget,
            answers_given: 0,
            noise,
            config,
        })
    }

    pub fn remaining_budget(&self) -> u64 {
        self.remaining_budget
    }

    pub fn noisy_threshold(&self) -> f64 {
        self.noisy_threshold
    }

    pub fn answers_given(&self) -> u64 {
        self.answers_given
    }

    /// Answer a statistical query given the two datasets.
    pub fn answer<T>(
        &mut self,
        q: &StatisticalQuery<T>,
        training: &[T],
        holdout: &[T],
    ) -> Result<Answer> {
        let e_train = empirical_mean(q, training)?;
        let e_hold = empirical_mean(q, holdout)?;
        self.answer_means(e_train, e_hold)
    }

    /// Core state machine over precomputed empirical means. Callers with
    /// column-streamed data use this to avoid re-evaluating queries.
    ///
    /// Draw order is fixed (eta, then on trigger xi then gamma) and the
    /// budget decrement and threshold refresh happen before the value is
    /// returned, matching the reference trace exactly.
    pub fn answer_means(&mut self, e_train: f64, e_hold: f64) -> Result<Answer> {
        self.answers_given += 1;
        if self.remaining_budget < 1 {
            return Ok(Answer::Bottom);
        }
        let sigma = self.config.sigma;
        let eta = self.noise.draw(4.0 * sigma)?;
        let gap = if self.config.one_sided { e_hold - e_train } else { (e_hold - e_train).abs() };
        if gap > self.noisy_threshold + eta {
            let xi = self.noise.draw(sigma)?;
            let gamma = self.noise.draw(2.0 * sigma)?;
            self.remaining_budget -= 1;
            self.noisy_threshold = self.config.threshold + gamma;
            Ok(Answer::Value(e_hold + xi))
        } else {
            Ok(Answer::Value(e_train))
        }
    }
}

/// Output of [`thresholdout_params`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdoutParams {
    pub threshold: f64,
    pub sigma: f64,
    /// Smallest holdout size supported by either sample bound, rounded up.
    pub n_min: u64,
    /// The two underlying bounds, before rounding.
    pub n0: f64,
    pub n1: f64,
}

/// Theoretical parameter calculator for a target accuracy `tau`, failure
/// probability `beta`, query count `m`, and budget `b`: `T = 3 tau / 4`,
/// `sigma = tau / (96 ln(4m/beta))`, and the holdout-size requirement
/// `min(n0, n1)` evaluated at accuracy `tau/8` and confidence `beta/(2m)`.
///
/// The calculator applies to the Laplace noise path; the Gaussian variant
/// used in experiments has no matching closed-form guarantee here.
pub fn thresholdout_params(tau: f64, beta: f64, m: u64, b: u64) -> Result<ThresholdoutParams> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter(format!("tau must be in (0,1), got {tau}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter(format!("beta must be in (0,1), got {beta}")));
    }
    if b < 1 || m < b {
        return Err(Error::InvalidParameter(format!("need m >= B >= 1, got m={m} B={b}")));
    }
    let threshold = 3.0 * tau / 4.0;
    let sigma = tau / (96.0 * (4.0 * m as f64 / beta).ln());
    let tau_p = tau / 8.0;
    let beta_p = beta / (2.0 * m as f64);
    let bf = b as f64;
    let n0 = f64::max(2.0 * bf / (sigma * tau_p), (6.0 / beta_p).ln() / (tau_p * tau_p));
    let n1 = 80.0 * (bf * (1.0 / (tau_p * beta_p)).ln()).sqrt() / (tau_p * sigma);
    let n_min = n0.min(n1).ceil() as u64;
    Ok(ThresholdoutParams { threshold, sigma, n_min, n0, n1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::noise::NoiseKind;

    fn noise_free(threshold: f64, budget: u64) -> Thresholdout {
        let cfg = ThresholdoutConfig::new(threshold, 0.0, budget, NoiseSource::none()).unwrap();
        Thresholdout::new(cfg).unwrap()
    }

    #[test]
    fn below_threshold_returns_training_mean_exactly() {
        let mut tho = noise_free(0.01, 10);
        let q: StatisticalQuery<f64> = StatisticalQuery::new("id", |x| *x);
        let data = [0.25, 0.5, 0.75];
        let ans = tho.answer(&q, &data, &data).unwrap();
        assert_eq!(ans, Answer::Value(empirical_mean(&q, &data).unwrap()));
        assert_eq!(tho.remaining_budget(), 10);
    }

    #[test]
    fn zero_budget_answers_bottom() {
        let mut tho = noise_free(0.5, 0);
        assert_eq!(tho.answer_means(0.2, 0.9).unwrap(), Answer::Bottom);
    }

    #[test]
    fn hand_trace_above_threshold() {
        // sigma=0, T=0.1, E_hold=0.8, E_train=0.5: releases 0.8 and spends one
        let mut tho = noise_free(0.1, 3);
        assert_eq!(tho.answer_means(0.5, 0.8).unwrap(), Answer::Value(0.8));
        assert_eq!(tho.remaining_budget(), 2);
    }

    #[test]
    fn one_sided_ignores_negative_gap() {
        let cfg = ThresholdoutConfig::new(0.1, 0.0, 3, NoiseSource::none())
            .unwrap()
            .one_sided();
        let mut tho = Thresholdout::new(cfg).unwrap();
        // holdout below training: signed gap is negative, never triggers
        assert_eq!(tho.answer_means(0.9, 0.2).unwrap(), Answer::Value(0.9));
        assert_eq!(tho.remaining_budget(), 3);
        // holdout above training triggers as usual
        assert_eq!(tho.answer_means(0.2, 0.9).unwrap(), Answer::Value(0.9));
        assert_eq!(tho.remaining_budget(), 2);
    }

    #[test]
    fn empty_dataset_propagates_error() {
        let mut tho = noise_free(0.1, 3);
        let q: StatisticalQuery<f64> = StatisticalQuery::constant(0.5);
        assert!(tho.answer(&q, &[], &[1.0]).is_err());
    }

    #[test]
    fn seed_reproducibility() {
        let mk = || {
            let noise = NoiseSource::new(NoiseKind::Laplace, 1234);
            Thresholdout::new(ThresholdoutConfig::new(0.05, 0.02, 5, noise).unwrap()).unwrap()
        };
        let mut a = mk();
        let mut b = mk();
        let gaps = [(0.5, 0.5), (0.2, 0.8), (0.4, 0.45), (0.1, 0.9), (0.6, 0.3), (0.5, 0.58)];
        for (t, h) in gaps {
            assert_eq!(a.answer_means(t, h).unwrap(), b.answer_means(t, h).unwrap());
        }
    }

    #[test]
    fn params_match_stated_formulas() {
        let p = thresholdout_params(0.24, 0.1, 100, 10).unwrap();
        assert_eq!(p.threshold, 0.18);
        let expect = 0.24 / (96.0 * (4000.0f64).ln());
        assert!((p.sigma - expect).abs() < 1e-15);
    }

    #[test]
    fn params_branch_crossover() {
        // small budget picks the linear-in-B bound, huge budget the sqrt one
        let small = thresholdout_params(0.24, 0.1, 100_000, 1).unwrap();
        assert!(small.n0 < small.n1);
        assert_eq!(small.n_min, small.n0.ceil() as u64);
        let large = thresholdout_params(0.24, 0.1, 100_000, 100_000).unwrap();
        assert!(large.n1 < large.n0);
        assert_eq!(large.n_min, large.n1.ceil() as u64);
    }

    #[test]
    fn params_rejects_bad_ranges() {
        assert!(thresholdout_params(0.0, 0.1, 10, 1).is_err());
        assert!(thresholdout_params(0.2, 1.0, 10, 1).is_err());
        assert!(thresholdout_params(0.2, 0.1, 5, 6).is_err());
        assert!(thresholdout_params(0.2, 0.1, 5, 0).is_err());
    }
}
