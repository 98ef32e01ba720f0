//! SparseValidate: answers arbitrary dataset predicates under two budgets,
//! a cap `m` on the total number of queries and a cap `B` on the number of
//! positive answers. A query that spends the last positive-answer unit is
//! still answered; everything after an exhausted budget gets `Exhausted`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mechanisms::query::ValidationPredicate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparseAnswer {
    Bit(bool),
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct SparseValidate {
    total_budget: u64,
    ones_budget: u64,
    queries_asked: u64,
    ones_returned: u64,
    transcript: Vec<bool>,
}

impl SparseValidate {
    pub fn new(total_budget_m: u64, ones_budget_b: u64) -> Self {
        Self {
            total_budget: total_budget_m,
            ones_budget: ones_budget_b,
            queries_asked: 0,
            ones_returned: 0,
            transcript: Vec::new(),
        }
    }

    pub fn queries_asked(&self) -> u64 {
        self.queries_asked
    }

    pub fn ones_returned(&self) -> u64 {
        self.ones_returned
    }

    /// Bits of every answered query, in order.
    pub fn transcript(&self) -> &[bool] {
        &self.transcript
    }

    pub fn answer<T>(&mut self, psi: &ValidationPredicate<T>, holdout: &[T]) -> SparseAnswer {
        if self.queries_asked >= self.total_budget || self.ones_returned >= self.ones_budget {
            return SparseAnswer::Exhausted;
        }
        let bit = psi.eval(holdout);
        self.queries_asked += 1;
        if bit {
            self.ones_returned += 1;
        }
        self.transcript.push(bit);
        SparseAnswer::Bit(bit)
    }
}

/// Number of length-`i-1` answer prefixes with at most `B` ones:
/// `ell_i = sum_{j=0}^{min(i-1,B)} C(i, j)`.
pub fn sparse_validate_ell(i: u64, b: u64) -> BigUint {
    let mut sum = BigUint::zero();
    let mut binom = BigUint::from(1u32); // C(i, 0)
    for j in 0..=i.saturating_sub(1).min(b) {
        if j > 0 {
            // C(i, j) = C(i, j-1) * (i - j + 1) / j
            binom = binom * BigUint::from(i - j + 1) / BigUint::from(j);
        }
        sum += &binom;
    }
    sum
}

/// Per-query failure probability bound `ell_i * beta_i`, clipped to [0, 1].
pub fn sparse_validate_failure_bound(i: u64, b: u64, beta_i: f64) -> Result<f64> {
    if i < 1 {
        return Err(Error::InvalidParameter("query index i must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&beta_i) {
        return Err(Error::InvalidParameter(format!("beta_i must be in [0,1], got {beta_i}")));
    }
    if beta_i == 0.0 {
        return Ok(0.0);
    }
    // huge ell saturates to +inf and the product clips to 1
    let ell = sparse_validate_ell(i, b).to_f64().unwrap_or(f64::INFINITY);
    Ok((ell * beta_i).min(1.0))
}
