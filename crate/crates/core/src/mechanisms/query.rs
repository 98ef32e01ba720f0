use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A statistical query: a named function from a domain element to `[0, 1]`.
///
/// The evaluator's output is clamped to `[0, 1]`, so the range invariant
/// holds by construction regardless of the supplied closure.
#[derive(Clone)]
pub struct StatisticalQuery<T: ?Sized> {
    label: String,
    evaluator: Arc<dyn Fn(&T) -> f64 + Send + Sync>,
}

impl<T: ?Sized> StatisticalQuery<T> {
    pub fn new(label: impl Into<String>, evaluator: impl Fn(&T) -> f64 + Send + Sync + 'static) -> Self {
        Self { label: label.into(), evaluator: Arc::new(evaluator) }
    }

    /// Query that ignores its input and returns `value` (clamped).
    pub fn constant(value: f64) -> Self {
        Self::new(format!("const({value})"), move |_| value)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: &T) -> f64 {
        (self.evaluator)(x).clamp(0.0, 1.0)
    }
}

impl<T: ?Sized> fmt::Debug for StatisticalQuery<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StatisticalQuery").field("label", &self.label).finish()
    }
}

/// Mean of `q` over the dataset. Errors on an empty dataset; the result is
/// in `[0, 1]` because every term is.
pub fn empirical_mean<T>(q: &StatisticalQuery<T>, dataset: &[T]) -> Result<f64> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let sum: f64 = dataset.iter().map(|x| q.eval(x)).sum();
    Ok(sum / dataset.len() as f64)
}

type DatasetPredicate<T> = dyn Fn(&[T]) -> bool + Send + Sync;

/// A validation predicate: a named boolean function of a whole dataset.
///
/// Predicates must be deterministic given the dataset (any internal
/// randomness must come from a fixed seed captured by the closure).
#[derive(Clone)]
pub struct ValidationPredicate<T> {
    label: String,
    evaluator: Arc<DatasetPredicate<T>>,
}

impl<T> ValidationPredicate<T> {
    pub fn new(label: impl Into<String>, evaluator: impl Fn(&[T]) -> bool + Send + Sync + 'static) -> Self {
        Self { label: label.into(), evaluator: Arc::new(evaluator) }
    }

    pub fn constant(bit: bool) -> Self {
        Self::new(format!("const({bit})"), move |_| bit)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, dataset: &[T]) -> bool {
        (self.evaluator)(dataset)
    }
}

impl<T> fmt::Debug for ValidationPredicate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValidationPredicate").field("label", &self.label).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_query_mean() {
        let q = StatisticalQuery::constant(0.7);
        let m = empirical_mean(&q, &[1.0, 2.0, 3.0]).unwrap();
        assert!((m - 0.7).abs() < 1e-12, "{m}");
    }

    #[test]
    fn identity_two_point_mean() {
        let q: StatisticalQuery<f64> = StatisticalQuery::new("id", |x| *x);
        assert_eq!(empirical_mean(&q, &[0.0, 1.0]).unwrap(), 0.5);
    }

    #[test]
    fn accuracy_query_hand_count() {
        // fixed classifier sign(x) on four labeled points: 3 of 4 correct
        let data = [(2.0, 1.0), (-1.0, -1.0), (0.5, -1.0), (-3.0, -1.0)];
        let q: StatisticalQuery<(f64, f64)> = StatisticalQuery::new("acc", |ex: &(f64, f64)| {
            let pred = if ex.0 >= 0.0 { 1.0 } else { -1.0 };
            if pred == ex.1 {
                1.0
            } else {
                0.0
            }
        });
        assert_eq!(empirical_mean(&q, &data).unwrap(), 0.75);
    }

    #[test]
    fn empty_dataset_is_an_error() {
        let q = StatisticalQuery::constant(0.5);
        assert!(matches!(empirical_mean::<f64>(&q, &[]), Err(Error::EmptyDataset)));
    }

    #[test]
    fn range_clamped_by_construction() {
        let q: StatisticalQuery<f64> = StatisticalQuery::new("wild", |x| 10.0 * x);
        assert_eq!(q.eval(&5.0), 1.0);
        assert_eq!(q.eval(&-5.0), 0.0);
    }
}
