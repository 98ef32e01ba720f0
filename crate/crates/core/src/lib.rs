//! Reusable-holdout mechanisms and the machinery around them: Thresholdout
//! and SparseValidate, max-information / differential-privacy / description-
//! length bound calculators, a bounded rejection sampler with its exact
//! output law, a noise-free Median Mechanism, and the synthetic
//! variable-selection overfitting study.

// parameter guards use negated comparisons so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod dl_sampler;
mod error;
pub mod experiments;
pub mod mechanisms;
pub mod median;
pub mod seed;

pub use error::{Error, Result};
