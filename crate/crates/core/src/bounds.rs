//! Closed-form privacy, description-length, and max-information bound
//! calculators, plus an exact approximate-max-divergence oracle over explicit
//! finite joint distributions used to cross-validate them.
//!
//! All information quantities are in bits (base-2 logarithms); natural-log
//! formulas carry an explicit `log2(e)` factor.

use std::f64::consts::LOG2_E;

use crate::error::{Error, Result};

/// Tolerance for probability normalization checks.
pub const PROB_TOL: f64 = 1e-12;
/// Absolute tolerance, in bits, of the exact max-information search.
pub const BITS_TOL: f64 = 1e-6;
/// Upper end of the binary-search bracket, in bits.
const BITS_MAX: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyParams {
    pub epsilon: f64,
    /// 0 denotes pure differential privacy.
    pub delta: f64,
}

impl PrivacyParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {epsilon}")));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("delta must be in [0,1], got {delta}")));
        }
        Ok(Self { epsilon, delta })
    }
}

/// A `(k, beta)` max-information bound: k bits holding with probability
/// slack beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxInfoBound {
    pub k_bits: f64,
    pub beta: f64,
}

/// Inputs to the McDiarmid-style concentration bounds: a function of `n`
/// independent samples with per-coordinate sensitivity `c`, and a deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationParams {
    pub sensitivity_c: f64,
    pub n: u64,
    pub deviation: f64,
}

impl ConcentrationParams {
    pub fn new(sensitivity_c: f64, n: u64, deviation: f64) -> Result<Self> {
        if !(sensitivity_c > 0.0) {
            return Err(Error::InvalidParameter("sensitivity must be > 0".into()));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        if !(deviation >= 0.0) {
            return Err(Error::InvalidParameter("deviation must be >= 0".into()));
        }
        Ok(Self { sensitivity_c, n, deviation })
    }
}

/// Basic adaptive composition: parameters add component-wise.
pub fn dp_compose_basic(parts: &[PrivacyParams]) -> Result<PrivacyParams> {
    if parts.is_empty() {
        return Err(Error::InvalidParameter("composition of an empty list".into()));
    }
    Ok(PrivacyParams {
        epsilon: parts.iter().map(|p| p.epsilon).sum(),
        delta: parts.iter().map(|p| p.delta).sum(),
    })
}

/// Advanced composition of `m` copies of an `(eps, delta)` mechanism:
/// `eps' = sqrt(2 m ln(1/delta')) eps + m eps (e^eps - 1)`, total failure
/// `m delta + delta'`.
pub fn dp_compose_advanced(
    eps: f64,
    delta: f64,
    m: u64,
    delta_prime: f64,
) -> Result<PrivacyParams> {
    if !(eps >= 0.0) || !(delta >= 0.0) {
        return Err(Error::InvalidParameter("eps and delta must be >= 0".into()));
    }
    if m < 1 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    if !(delta_prime > 0.0) {
        return Err(Error::InvalidParameter(
            "delta' must be > 0 (the log term diverges at 0)".into(),
        ));
    }
    let mf = m as f64;
    let eps_total = (2.0 * mf * (1.0 / delta_prime).ln()).sqrt() * eps + mf * eps * (eps.exp_m1());
    Ok(PrivacyParams { epsilon: eps_total, delta: mf * delta + delta_prime })
}

/// Max-information of a pure eps-DP algorithm on arbitrary n-element
/// datasets: `log2(e) * eps * n` bits with no slack.
pub fn maxinfo_from_dp_pure(eps: f64, n: u64) -> Result<MaxInfoBound> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter("eps must be >= 0".into()));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    Ok(MaxInfoBound { k_bits: LOG2_E * eps * n as f64, beta: 0.0 })
}

/// The stronger i.i.d. bound:
/// `log2(e) (eps^2 n / 2 + eps sqrt(n ln(2/beta) / 2))` bits with slack beta.
pub fn maxinfo_from_dp_iid(eps: f64, n: u64, beta: f64) -> Result<MaxInfoBound> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter("eps must be >= 0".into()));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter(format!("beta must be in (0,1), got {beta}")));
    }
    let nf = n as f64;
    let k = LOG2_E * (eps * eps * nf / 2.0 + eps * (nf * (2.0 / beta).ln() / 2.0).sqrt());
    Ok(MaxInfoBound { k_bits: k, beta })
}

/// Description length to max-information: an output range of `range_size`
/// values gives `log2(range_size / beta)` bits with slack beta.
pub fn maxinfo_from_dl(range_size: u64, beta: f64) -> Result<MaxInfoBound> {
    if range_size < 1 {
        return Err(Error::InvalidParameter("range size must be >= 1".into()));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!("beta must be in (0,1], got {beta}")));
    }
    Ok(MaxInfoBound { k_bits: (range_size as f64 / beta).log2(), beta })
}

/// Randomized description length `k` bits to max-information:
/// `k + log2(1/beta)` bits with slack beta.
pub fn maxinfo_from_rdl(rdl_bits: f64, beta: f64) -> Result<MaxInfoBound> {
    if !(rdl_bits >= 0.0) {
        return Err(Error::InvalidParameter("rdl bits must be >= 0".into()));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!("beta must be in (0,1], got {beta}")));
    }
    Ok(MaxInfoBound { k_bits: rdl_bits + (1.0 / beta).log2(), beta })
}

/// Adaptive composition of max-information bounds: bits and slacks add,
/// slack clipped at 1.
pub fn maxinfo_compose(parts: &[MaxInfoBound]) -> Result<MaxInfoBound> {
    if parts.is_empty() {
        return Err(Error::InvalidParameter("composition of an empty list".into()));
    }
    Ok(MaxInfoBound {
        k_bits: parts.iter().map(|p| p.k_bits).sum(),
        beta: parts.iter().map(|p| p.beta).sum::<f64>().min(1.0),
    })
}

/// Probability that a bad event survives a `(k, beta)` max-information
/// bound: `min(1, 2^k * base_prob + beta)`.
pub fn bad_event_bound(mi: MaxInfoBound, base_prob: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&base_prob) {
        return Err(Error::InvalidParameter(format!(
            "base probability must be in [0,1], got {base_prob}"
        )));
    }
    Ok((mi.k_bits.exp2() * base_prob + mi.beta).min(1.0))
}

/// McDiarmid tail: `exp(-2 a^2 / (n c^2))`.
pub fn mcdiarmid_bound(cp: ConcentrationParams) -> f64 {
    let a = cp.deviation;
    (-2.0 * a * a / (cp.n as f64 * cp.sensitivity_c * cp.sensitivity_c)).exp()
}

/// The DP level that preserves McDiarmid-style concentration, and the
/// failure probability it yields: `(tau/(c n), exp(-3 tau^2 / (4 c^2 n)))`.
pub fn dp_generalization_bound(cp: ConcentrationParams) -> (f64, f64) {
    let c = cp.sensitivity_c;
    let n = cp.n as f64;
    let tau = cp.deviation;
    (tau / (c * n), (-3.0 * tau * tau / (4.0 * c * c * n)).exp())
}

/// An explicit joint distribution over a finite `X x Y` grid.
#[derive(Debug, Clone)]
pub struct DiscreteJoint {
    support_x: Vec<String>,
    support_y: Vec<String>,
    joint: Vec<Vec<f64>>,
}

impl DiscreteJoint {
    /// Build from a row-major matrix `joint[x][y]`; rows index X.
    pub fn from_matrix(joint: Vec<Vec<f64>>) -> Result<Self> {
        if joint.is_empty() || joint[0].is_empty() {
            return Err(Error::InvalidParameter("joint must be a nonempty matrix".into()));
        }
        let ny = joint[0].len();
        let mut total = 0.0;
        for row in &joint {
            if row.len() != ny {
                return Err(Error::InvalidParameter("joint rows have unequal lengths".into()));
            }
            for &p in row {
                if !(p >= 0.0) {
                    return Err(Error::InvalidParameter(format!("negative probability {p}")));
                }
                total += p;
            }
        }
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidParameter(format!(
                "joint mass sums to {total}, expected 1 within {PROB_TOL}"
            )));
        }
        let support_x = (0..joint.len()).map(|i| format!("x{i}")).collect();
        let support_y = (0..ny).map(|j| format!("y{j}")).collect();
        Ok(Self { support_x, support_y, joint })
    }

    pub fn support_x(&self) -> &[String] {
        &self.support_x
    }

    pub fn support_y(&self) -> &[String] {
        &self.support_y
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.joint
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        self.joint.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        let ny = self.joint[0].len();
        let mut m = vec![0.0; ny];
        for row in &self.joint {
            for (j, &p) in row.iter().enumerate() {
                m[j] += p;
            }
        }
        m
    }

    /// The same joint with X and Y swapped.
    pub fn transposed(&self) -> Self {
        let nx = self.joint.len();
        let ny = self.joint[0].len();
        let mut t = vec![vec![0.0; nx]; ny];
        for (i, row) in self.joint.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                t[j][i] = p;
            }
        }
        Self {
            support_x: self.support_y.clone(),
            support_y: self.support_x.clone(),
            joint: t,
        }
    }

    /// Push Y through a deterministic map `f: y-index -> new index`,
    /// producing the joint of `(X, f(Y))` with `out_size` output values.
    pub fn postprocess_y(&self, f: impl Fn(usize) -> usize, out_size: usize) -> Result<Self> {
        let mut joint = vec![vec![0.0; out_size]; self.joint.len()];
        for (i, row) in self.joint.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                let fj = f(j);
                if fj >= out_size {
                    return Err(Error::InvalidParameter("post-map index out of range".into()));
                }
                joint[i][fj] += p;
            }
        }
        Self::from_matrix(joint)
    }
}

/// Result of the exact oracle: either a value in bits or the infinite
/// sentinel (the bracket `[0, 64]` bits was insufficient).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxInfo {
    Bits(f64),
    Infinite,
}

impl MaxInfo {
    pub fn bits(self) -> Option<f64> {
        match self {
            MaxInfo::Bits(b) => Some(b),
            MaxInfo::Infinite => None,
        }
    }
}

/// Mass of the joint exceeding `2^k` times the product of marginals:
/// `sum_o max(P(o) - 2^k Q(o), 0)`. Nonincreasing and continuous in `k`.
fn hockey_stick(joint: &DiscreteJoint, k_bits: f64) -> f64 {
    let px = joint.marginal_x();
    let py = joint.marginal_y();
    let factor = k_bits.exp2();
    let mut excess = 0.0;
    for (i, row) in joint.matrix().iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            let q = px[i] * py[j];
            let d = p - factor * q;
            if d > 0.0 {
                excess += d;
            }
        }
    }
    excess
}

/// Exact beta-approximate max-information `I^beta(X; Y)` of an explicit
/// joint, via binary search on `k` over the identity
/// `D^beta((X,Y) || X x Y) <= k  <=>  sum_o max(P(o) - 2^k Q(o), 0) <= beta`.
///
/// The value is clamped at 0: once beta covers every distinguishing event
/// the divergence is defined as 0. Accurate to [`BITS_TOL`] bits.
pub fn maxinfo_exact(joint: &DiscreteJoint, beta: f64) -> Result<MaxInfo> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!("beta must be in [0,1), got {beta}")));
    }
    if hockey_stick(joint, 0.0) <= beta {
        return Ok(MaxInfo::Bits(0.0));
    }
    if hockey_stick(joint, BITS_MAX) > beta {
        return Ok(MaxInfo::Infinite);
    }
    let (mut lo, mut hi) = (0.0f64, BITS_MAX);
    while hi - lo > BITS_TOL / 2.0 {
        let mid = 0.5 * (lo + hi);
        if hockey_stick(joint, mid) <= beta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(MaxInfo::Bits(0.5 * (lo + hi)))
}

/// Plain max-divergence `D(P || Q) = log2 max_o P(o)/Q(o)` between two
/// index-aligned distributions; `Infinite` where P charges a Q-null outcome.
pub fn max_divergence_bits(p: &[f64], q: &[f64]) -> Result<MaxInfo> {
    if p.len() != q.len() {
        return Err(Error::InvalidParameter("distributions differ in support size".into()));
    }
    let mut worst: f64 = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Ok(MaxInfo::Infinite);
            }
            worst = worst.max(pi / qi);
        }
    }
    Ok(MaxInfo::Bits(worst.max(1.0).log2()))
}
