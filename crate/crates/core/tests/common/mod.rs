//! Helpers shared by the integration suites.
#![allow(dead_code)]

use adaptive_holdout::mechanisms::StatisticalQuery;
use adaptive_holdout::seed;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Tiny convenience wrapper for fuzz sessions.
pub struct SessionRng(ChaCha8Rng);

impl SessionRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn unit(&mut self) -> f64 {
        uniform(&mut self.0)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.0.next_u64() % bound
    }
}

/// A cloneable deterministic analyst for Median Mechanism sessions: query
/// `i` is a two-point value table derived from the session seed, the query
/// index, and the bits of every answer received so far.
#[derive(Clone)]
pub struct DeterministicAnalyst {
    seed: u64,
    max_queries: u64,
}

impl DeterministicAnalyst {
    pub fn as_fn(
        &mut self,
    ) -> impl FnMut(&[(String, f64)]) -> Option<StatisticalQuery<f64>> + '_ {
        let seed_val = self.seed;
        let max = self.max_queries;
        move |prefix: &[(String, f64)]| {
            if prefix.len() as u64 >= max {
                return None;
            }
            let mut h = seed::derive(seed_val, "analyst-query", prefix.len() as u64);
            for (_, answer) in prefix {
                h = seed::derive(h, "answer", answer.to_bits());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(h);
            // skew half the tables toward the extremes to provoke hard queries
            let extreme = rng.next_u64() % 2 == 0;
            let (v0, v1) = if extreme {
                (uniform(&mut rng) * 0.15, 0.85 + uniform(&mut rng) * 0.15)
            } else {
                (uniform(&mut rng), uniform(&mut rng))
            };
            let label = format!("q{}", prefix.len());
            Some(StatisticalQuery::new(label, move |x: &f64| if *x < 0.5 { v0 } else { v1 }))
        }
    }
}

pub fn deterministic_analyst(seed: u64, max_queries: u64) -> DeterministicAnalyst {
    DeterministicAnalyst { seed, max_queries }
}

mod regression;
#[allow(unused_imports)]
pub use regression::run_calculator_regression;
