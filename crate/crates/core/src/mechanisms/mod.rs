//! Holdout-reuse mechanisms: Thresholdout and SparseValidate, their noise
//! streams, and the parameter calculators that size them.
//!
//! Mechanism states are single-owner: one session mutates a state at a time,
//! and independent sessions use independent noise seeds.

mod noise;
mod query;
mod sparse;
mod thresholdout;

pub use noise::{NoiseKind, NoiseSource};
pub use query::{empirical_mean, StatisticalQuery, ValidationPredicate};
pub use sparse::{
    sparse_validate_ell, sparse_validate_failure_bound, SparseAnswer, SparseValidate,
};
pub use thresholdout::{
    thresholdout_params, Answer, Thresholdout, ThresholdoutConfig, ThresholdoutParams,
};
