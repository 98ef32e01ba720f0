//! Rejection sampling with a bounded trial count, its exact output-law
//! oracle, and the randomized-description-length accounting it achieves.
//!
//! Given a target Y and reference Z with `P_Y <= 2^k P_Z` pointwise, the
//! sampler draws `t = ceil(2^k ln(1/beta'))` candidates from Z, accepts
//! candidate `y` with probability `P_Y(y) / (2^k P_Z(y))`, returns the first
//! accepted candidate, and falls back to the first candidate when all are
//! rejected. Its transcript can be described with `log2(t)` bits.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// Slack allowed in the pointwise ratio check, absorbing float rounding in
/// caller-constructed distributions.
const RATIO_TOL: f64 = 1e-9;

/// A probability distribution over outcomes `0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("distribution over empty support".into()));
        }
        let mut total = 0.0;
        for &p in &probs {
            if !(p >= 0.0) {
                return Err(Error::InvalidParameter(format!("negative probability {p}")));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn uniform(len: usize) -> Self {
        Self { probs: vec![1.0 / len as f64; len] }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Inverse-CDF draw from one uniform.
    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        let mut cum = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            cum += p;
            if u < cum {
                return i;
            }
        }
        self.probs.len() - 1
    }
}

/// Total variation distance `1/2 sum |P - Q|` over a common support.
pub fn tv_distance(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::InvalidParameter("distributions differ in support size".into()));
    }
    Ok(p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0)
}

/// Trial count `t = ceil(2^k ln(1/beta'))`.
pub fn trial_count(k_bits: f64, beta_prime: f64) -> Result<u64> {
    if !(k_bits >= 0.0) {
        return Err(Error::InvalidParameter("k must be >= 0".into()));
    }
    if !(beta_prime > 0.0 && beta_prime < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "beta' must be in (0,1), got {beta_prime}"
        )));
    }
    Ok((k_bits.exp2() * (1.0 / beta_prime).ln()).ceil() as u64)
}

/// Per-outcome acceptance probabilities `p_i = P_Y(i) / (2^k P_Z(i))`,
/// validated to be at most 1 wherever Y has mass.
fn acceptance_probs(
    target_y: &DiscreteDistribution,
    reference_z: &DiscreteDistribution,
    k_bits: f64,
) -> Result<Vec<f64>> {
    if target_y.len() != reference_z.len() {
        return Err(Error::InvalidParameter("Y and Z must share a support universe".into()));
    }
    let factor = k_bits.exp2();
    let mut probs = Vec::with_capacity(target_y.len());
    for (i, (&py, &pz)) in target_y.probs.iter().zip(&reference_z.probs).enumerate() {
        if py > 0.0 && pz <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "outcome {i}: target has mass where reference has none"
            )));
        }
        let p = if py == 0.0 { 0.0 } else { py / (factor * pz) };
        if p > 1.0 + RATIO_TOL {
            return Err(Error::InvalidParameter(format!(
                "outcome {i}: acceptance probability {p} > 1, divergence exceeds k={k_bits}"
            )));
        }
        probs.push(p.min(1.0));
    }
    Ok(probs)
}

/// Run the sampler once with a seeded stream; returns the outcome index.
pub fn rejection_sample(
    target_y: &DiscreteDistribution,
    reference_z: &DiscreteDistribution,
    k_bits: f64,
    beta_prime: f64,
    seed: u64,
) -> Result<usize> {
    let accept = acceptance_probs(target_y, reference_z, k_bits)?;
    let t = trial_count(k_bits, beta_prime)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first = None;
    for _ in 0..t {
        let y = reference_z.sample(&mut rng);
        if first.is_none() {
            first = Some(y);
        }
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        if u < accept[y] {
            return Ok(y);
        }
    }
    Ok(first.expect("t >= 1"))
}

/// Exact law of [`rejection_sample`], computed analytically.
///
/// With per-trial acceptance mass `a = sum_y P_Z(y) p(y)`, outcome `y`
/// receives `P_Z(y) p(y)` from each round reached unaccepted, i.e.
/// `sum_{i=1..t} (1-a)^{i-1} P_Z(y) p(y)`, plus the fallback mass. The
/// fallback returns the first candidate conditioned on every trial having
/// rejected, so it contributes `P_Z(y) (1 - p(y)) (1-a)^{t-1}` rather than
/// `(1-a)^t P_Z(y)`: rejection of trial one is correlated with its value.
pub fn rejection_output_distribution(
    target_y: &DiscreteDistribution,
    reference_z: &DiscreteDistribution,
    k_bits: f64,
    beta_prime: f64,
) -> Result<DiscreteDistribution> {
    let accept = acceptance_probs(target_y, reference_z, k_bits)?;
    let t = trial_count(k_bits, beta_prime)?;
    let a: f64 = reference_z.probs.iter().zip(&accept).map(|(z, p)| z * p).sum();
    // sum_{i=1..t} (1-a)^{i-1}, with the a=0 limit handled explicitly
    let geom: f64 = if a == 0.0 { t as f64 } else { (1.0 - pow_u64(1.0 - a, t)) / a };
    let reject_all_tail = pow_u64(1.0 - a, t - 1);
    let mut probs: Vec<f64> = reference_z
        .probs
        .iter()
        .zip(&accept)
        .map(|(&z, &p)| z * p * geom + z * (1.0 - p) * reject_all_tail)
        .collect();
    // renormalize away accumulated rounding (sums to 1 analytically)
    let total: f64 = probs.iter().sum();
    debug_assert!((total - 1.0).abs() < 1e-9, "law mass {total}");
    for p in &mut probs {
        *p /= total;
    }
    DiscreteDistribution::new(probs)
}

/// Exact integer power by repeated squaring; `powi` takes only an i32.
fn pow_u64(base: f64, mut exp: u64) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= b;
        }
        b *= b;
        exp >>= 1;
    }
    acc
}

/// Probability that every trial rejects: `(1 - 2^{-k})^t` when Y is a
/// full distribution (per-trial acceptance is then exactly `2^{-k}`).
pub fn fallback_probability(k_bits: f64, beta_prime: f64) -> Result<f64> {
    let t = trial_count(k_bits, beta_prime)?;
    Ok(pow_u64(1.0 - (-k_bits).exp2(), t))
}

/// Randomized description length of the sampler's transcript:
/// `log2 t = k + log2 ln(1/beta')` bits.
pub fn rdl_of_transcript(k_bits: f64, beta_prime: f64) -> Result<f64> {
    if !(k_bits >= 0.0) {
        return Err(Error::InvalidParameter("k must be >= 0".into()));
    }
    if !(beta_prime > 0.0 && beta_prime < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "beta' must be in (0,1), got {beta_prime}"
        )));
    }
    Ok(k_bits + (1.0 / beta_prime).ln().log2())
}
