//! Seeded noise streams for the holdout mechanisms.
//!
//! Sampling is hand-rolled on top of a ChaCha8 stream so that a fixed seed
//! yields the same draw sequence on every platform and build: Laplace via the
//! inverse CDF of a single uniform per draw, Gaussian via Box-Muller.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// Which distribution a [`NoiseSource`] draws from. `None` makes every draw
/// exactly zero, which turns the mechanisms into their deterministic
/// reference form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Laplace,
    Gaussian,
    None,
}

/// A seeded stream of noise draws at caller-supplied scales.
///
/// For `Laplace` the scale is the distribution's `b` parameter (density
/// `exp(-|x|/b) / 2b`); for `Gaussian` it is the standard deviation.
#[derive(Debug, Clone)]
pub struct NoiseSource {
    kind: NoiseKind,
    rng_seed: u64,
    rng: ChaCha8Rng,
}

impl NoiseSource {
    pub fn new(kind: NoiseKind, rng_seed: u64) -> Self {
        Self { kind, rng_seed, rng: ChaCha8Rng::seed_from_u64(rng_seed) }
    }

    pub fn none() -> Self {
        Self::new(NoiseKind::None, 0)
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    /// Uniform in the open interval (0, 1).
    fn uniform(&mut self) -> f64 {
        loop {
            let u = (self.rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            if u > 0.0 {
                return u;
            }
        }
    }

    /// One noise draw at the given scale.
    pub fn draw(&mut self, scale: f64) -> Result<f64> {
        if !(scale >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise scale must be nonnegative, got {scale}"
            )));
        }
        match self.kind {
            NoiseKind::None => Ok(0.0),
            NoiseKind::Laplace => {
                // inverse CDF of one uniform: sign(u-1/2) ln(1-2|u-1/2|)
                let u = self.uniform() - 0.5;
                Ok(-scale * u.signum() * (1.0 - 2.0 * u.abs()).ln())
            }
            NoiseKind::Gaussian => {
                // Box-Muller; the second variate is discarded to keep a
                // fixed two-uniforms-per-draw consumption pattern.
                let u1 = self.uniform();
                let u2 = self.uniform();
                Ok(scale * (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn none_kind_is_exactly_zero() {
        let mut src = NoiseSource::new(NoiseKind::None, 42);
        assert_eq!(src.draw(5.0).unwrap(), 0.0);
        assert_eq!(src.draw(0.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_scale_rejected() {
        let mut src = NoiseSource::new(NoiseKind::Laplace, 1);
        assert!(src.draw(-1.0).is_err());
    }

    #[test]
    fn fixed_seed_reproduces_sequence() {
        for kind in [NoiseKind::Laplace, NoiseKind::Gaussian] {
            let mut a = NoiseSource::new(kind, 99);
            let mut b = NoiseSource::new(kind, 99);
            for _ in 0..100 {
                assert_eq!(a.draw(1.5).unwrap(), b.draw(1.5).unwrap());
            }
        }
    }

    #[test]
    fn laplace_empirical_median_near_zero() {
        let mut src = NoiseSource::new(NoiseKind::Laplace, 7);
        let mut draws: Vec<f64> = (0..100_000).map(|_| src.draw(1.0).unwrap()).collect();
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = draws[draws.len() / 2];
        assert!(median.abs() <= 0.02, "median {median}");
    }

    #[test]
    fn laplace_tail_matches_exact_rate() {
        // Pr[|x| >= 3b] = e^{-3}
        let mut src = NoiseSource::new(NoiseKind::Laplace, 11);
        let n = 1_000_000;
        let hits = (0..n).filter(|_| src.draw(1.0).unwrap().abs() >= 3.0).count();
        let rate = hits as f64 / n as f64;
        let exact = (-3.0f64).exp();
        assert!(rate >= 0.8 * exact && rate <= 1.2 * exact, "rate {rate} vs {exact}");
    }

    #[test]
    fn gaussian_moments_sane() {
        let mut src = NoiseSource::new(NoiseKind::Gaussian, 13);
        let n = 200_000;
        let draws: Vec<f64> = (0..n).map(|_| src.draw(2.0).unwrap()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 4.0).abs() < 0.1, "var {var}");
    }
}
