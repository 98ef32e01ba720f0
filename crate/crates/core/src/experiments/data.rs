//! Synthetic labeled datasets with column-streamed generation.
//!
//! Every column is generated from a sub-seed derived from the dataset seed
//! and the column index, so any column can be regenerated on demand and a
//! full-scale run never materializes the n x d feature matrix.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::seed;

/// How feature columns relate to the label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalSpec {
    /// Every column is N(0,1) independent of the label.
    None,
    /// The first `count` columns are N(label * bias, 1).
    Biased { count: usize, bias: f64 },
}

fn uniform_open(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        if u > 0.0 {
            return u;
        }
    }
}

/// Fill `out` with standard normals via Box-Muller, using both variates.
fn fill_standard_normal(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let mut i = 0;
    while i < out.len() {
        let u1 = uniform_open(rng);
        let u2 = uniform_open(rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        out[i] = r * theta.cos();
        if i + 1 < out.len() {
            out[i + 1] = r * theta.sin();
        }
        i += 2;
    }
}

/// Unbiased integer in [0, bound) by rejection.
fn gen_index(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}

#[derive(Debug, Clone)]
enum ColumnStore {
    /// Columns regenerated on demand from per-column sub-seeds.
    Generated { seed: u64, signal: SignalSpec },
    /// Explicit column-major features, for small hand-built datasets.
    Dense(Vec<Vec<f64>>),
}

/// A labeled dataset: `n` examples of `d` real attributes with labels in
/// {-1, +1}.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    n: usize,
    d: usize,
    labels: Vec<f64>,
    store: ColumnStore,
}

impl LabeledDataset {
    /// Draw a fresh dataset: labels uniform over {-1,+1}, columns per the
    /// signal spec. Column `j` only depends on `(seed, j)` and the labels.
    pub fn generate(n: usize, d: usize, signal: SignalSpec, seed: u64) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidParameter("n and d must be >= 1".into()));
        }
        if let SignalSpec::Biased { count, .. } = signal {
            if count > d {
                return Err(Error::InvalidParameter(format!(
                    "biased column count {count} exceeds d={d}"
                )));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, "labels", 0));
        let labels = (0..n).map(|_| if rng.next_u64() & 1 == 0 { -1.0 } else { 1.0 }).collect();
        Ok(Self { n, d, labels, store: ColumnStore::Generated { seed, signal } })
    }

    /// Build from explicit column-major features.
    pub fn from_columns(columns: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || columns.is_empty() {
            return Err(Error::InvalidParameter("dataset must be nonempty".into()));
        }
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidParameter("column lengths differ from label count".into()));
        }
        if labels.iter().any(|&y| y != 1.0 && y != -1.0) {
            return Err(Error::InvalidParameter("labels must be exactly +1 or -1".into()));
        }
        let d = columns.len();
        Ok(Self { n, d, labels, store: ColumnStore::Dense(columns) })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.d)
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    /// Write column `j` into `buf` (cleared first).
    pub fn column_into(&self, j: usize, buf: &mut Vec<f64>) {
        assert!(j < self.d, "column {j} out of range (d={})", self.d);
        buf.clear();
        match &self.store {
            ColumnStore::Dense(cols) => buf.extend_from_slice(&cols[j]),
            ColumnStore::Generated { seed, signal } => {
                buf.resize(self.n, 0.0);
                let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(*seed, "column", j as u64));
                fill_standard_normal(&mut rng, buf);
                if let SignalSpec::Biased { count, bias } = signal {
                    if j < *count {
                        for (x, &y) in buf.iter_mut().zip(&self.labels) {
                            *x += bias * y;
                        }
                    }
                }
            }
        }
    }

    /// Materialize one example row (small datasets only).
    pub fn row(&self, i: usize) -> Vec<f64> {
        assert!(i < self.n);
        let mut buf = Vec::new();
        let mut row = Vec::with_capacity(self.d);
        for j in 0..self.d {
            self.column_into(j, &mut buf);
            row.push(buf[i]);
        }
        row
    }
}

/// Convenience wrapper matching the generation operation directly.
pub fn generate_dataset(n: usize, d: usize, signal: SignalSpec, seed: u64) -> Result<LabeledDataset> {
    LabeledDataset::generate(n, d, signal, seed)
}

/// Seeded permutation split of `0..total` into two halves.
pub fn split_rows(total: usize, seed: u64) -> (Vec<u32>, Vec<u32>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<u32> = (0..total as u32).collect();
    for i in (1..total).rev() {
        let j = gen_index(&mut rng, (i + 1) as u64) as usize;
        perm.swap(i, j);
    }
    let second = perm.split_off(total / 2);
    (perm, second)
}
