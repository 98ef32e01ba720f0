//! Noise-free Median Mechanism over a small explicit domain.
//!
//! The mechanism maintains a multiset of size-`t` candidate datasets that are
//! consistent with every answer released so far and answers each query with
//! their weighted median, falling back to a grid-rounded empirical value (a
//! "hard" query) when the median strays too far. Candidate datasets are
//! stored as count vectors with multinomial multiplicities, which is
//! equivalent to tuple enumeration for median purposes at exponentially
//! lower cost.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mechanisms::{empirical_mean, StatisticalQuery};

/// Default cap on the number of weighted multisets enumerated by [`MedianMechanism::new`].
pub const DEFAULT_MULTISET_CAP: u64 = 10_000_000;

/// A candidate dataset: counts per domain element, with the number of
/// ordered tuples it represents.
#[derive(Debug, Clone)]
struct Candidate {
    counts: Vec<u32>,
    multiplicity: BigUint,
}

impl Candidate {
    fn mean(&self, values: &[f64], t: f64) -> f64 {
        let sum: f64 = self.counts.iter().zip(values).map(|(&c, &v)| c as f64 * v).sum();
        sum / t
    }
}

/// A query the mechanism answered from the real dataset instead of the
/// median; the pair (index, released answer) is all that is needed to
/// replay the full transcript.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardRecord {
    /// Zero-based query index.
    pub index: u64,
    pub answer: f64,
}

/// One line of a live session transcript.
#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptEntry {
    pub label: String,
    pub a_pub: f64,
    pub a_priv: f64,
    pub answer: f64,
    pub hard: bool,
}

#[derive(Debug, Clone)]
pub struct MedianMechanism<T> {
    domain: Vec<T>,
    m: u64,
    tau: f64,
    alpha: f64,
    t: u64,
    consistent: Vec<Candidate>,
    hard_records: Vec<HardRecord>,
    queries_seen: u64,
}

/// Number of size-`t` multisets over `d` elements: C(t + d - 1, d - 1).
fn multiset_count(t: u64, d: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..d - 1 {
        acc = acc * BigUint::from(t + i + 1) / BigUint::from(i + 1);
    }
    acc
}

/// All count vectors summing to `t` over `d` slots, with multinomial
/// multiplicities, in lexicographic order.
fn enumerate_candidates(t: u64, d: usize) -> Vec<Candidate> {
    let mut out = Vec::new();
    let mut counts = vec![0u32; d];

    fn rec(
        slot: usize,
        remaining: u64,
        positions_left: u64,
        mult: BigUint,
        counts: &mut Vec<u32>,
        out: &mut Vec<Candidate>,
    ) {
        if slot == counts.len() - 1 {
            counts[slot] = remaining as u32;
            out.push(Candidate { counts: counts.clone(), multiplicity: mult });
            return;
        }
        for c in 0..=remaining {
            counts[slot] = c as u32;
            // multiply by C(positions_left, c)
            let mut m2 = mult.clone();
            for i in 0..c {
                m2 = m2 * BigUint::from(positions_left - i) / BigUint::from(i + 1);
            }
            rec(slot + 1, remaining - c, positions_left - c, m2, counts, out);
        }
        counts[slot] = 0;
    }

    rec(0, t, t, BigUint::one(), &mut counts, &mut out);
    out
}

impl<T> MedianMechanism<T> {
    /// Initialize with candidate size `t = ceil(log2(m) / alpha^2)` where
    /// `alpha = tau / 3`, enumerating every size-`t` multiset over the
    /// domain (capped at [`DEFAULT_MULTISET_CAP`] distinct multisets).
    pub fn new(domain: Vec<T>, m: u64, tau: f64) -> Result<Self> {
        Self::with_cap(domain, m, tau, DEFAULT_MULTISET_CAP)
    }

    pub fn with_cap(domain: Vec<T>, m: u64, tau: f64, cap: u64) -> Result<Self> {
        if domain.len() < 2 {
            return Err(Error::InvalidParameter("domain must have at least 2 elements".into()));
        }
        if m < 2 {
            return Err(Error::InvalidParameter("query budget m must be >= 2".into()));
        }
        // tau up to 3 keeps alpha = tau/3 within (0, 1]
        if !(tau > 0.0 && tau <= 3.0) {
            return Err(Error::InvalidParameter(format!("tau must be in (0,3], got {tau}")));
        }
        let alpha = tau / 3.0;
        // tiny relative cushion so 1-ulp dust cannot bump the ceiling
        let raw_t = (m as f64).log2() / (alpha * alpha);
        let t = (raw_t * (1.0 - 1e-12)).ceil() as u64;
        let count = multiset_count(t, domain.len() as u64);
        if count > BigUint::from(cap) {
            return Err(Error::ResourceLimit(format!(
                "candidate enumeration needs t={t} giving {count} multisets (cap {cap})"
            )));
        }
        let consistent = enumerate_candidates(t, domain.len());
        Ok(Self {
            domain,
            m,
            tau,
            alpha,
            t,
            consistent,
            hard_records: Vec::new(),
            queries_seen: 0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn query_budget(&self) -> u64 {
        self.m
    }

    pub fn candidate_size(&self) -> u64 {
        self.t
    }

    pub fn queries_seen(&self) -> u64 {
        self.queries_seen
    }

    pub fn hard_records(&self) -> &[HardRecord] {
        &self.hard_records
    }

    pub fn consistent_len(&self) -> usize {
        self.consistent.len()
    }

    /// Total multiplicity-weighted mass of the surviving candidates.
    pub fn consistent_mass(&self) -> BigUint {
        self.consistent.iter().map(|c| &c.multiplicity).sum()
    }

    /// Upper bound on hard queries: `log2|X| * log2(m) / alpha^2`.
    pub fn hard_query_bound(&self) -> f64 {
        (self.domain.len() as f64).log2() * (self.m as f64).log2() / (self.alpha * self.alpha)
    }

    fn query_values(&self, q: &StatisticalQuery<T>) -> Vec<f64> {
        self.domain.iter().map(|x| q.eval(x)).collect()
    }

    /// Multiplicity-weighted lower median of candidate means.
    fn public_answer(&self, values: &[f64]) -> f64 {
        let tf = self.t as f64;
        let mut pairs: Vec<(f64, &BigUint)> =
            self.consistent.iter().map(|c| (c.mean(values, tf), &c.multiplicity)).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let total: BigUint = pairs.iter().map(|(_, m)| (*m).clone()).sum();
        let threshold = (total + BigUint::one()) / BigUint::from(2u32);
        let mut cum = BigUint::zero();
        for (v, m) in &pairs {
            cum += *m;
            if cum >= threshold {
                return *v;
            }
        }
        pairs.last().expect("consistent set nonempty").0
    }

    /// Greatest multiple of alpha not exceeding `a`.
    fn floor_to_grid(&self, a: f64) -> f64 {
        (a / self.alpha).floor() * self.alpha
    }

    /// Answer one query against the real dataset `s`.
    pub fn answer(&mut self, q: &StatisticalQuery<T>, s: &[T]) -> Result<f64> {
        Ok(self.answer_entry(q, s)?.answer)
    }

    /// Like [`Self::answer`] but returns the full transcript line.
    pub fn answer_entry(&mut self, q: &StatisticalQuery<T>, s: &[T]) -> Result<TranscriptEntry> {
        if self.queries_seen >= self.m {
            return Err(Error::BudgetExhausted);
        }
        let index = self.queries_seen;
        self.queries_seen += 1;
        let values = self.query_values(q);
        let a_pub = self.public_answer(&values);
        let a_priv = empirical_mean(q, s)?;
        if (a_pub - a_priv).abs() <= 2.0 * self.alpha {
            return Ok(TranscriptEntry {
                label: q.label().to_string(),
                a_pub,
                a_priv,
                answer: a_pub,
                hard: false,
            });
        }
        let answer = self.floor_to_grid(a_priv);
        self.hard_records.push(HardRecord { index, answer });
        let two_alpha = 2.0 * self.alpha;
        let tf = self.t as f64;
        self.consistent.retain(|c| (answer - c.mean(&values, tf)).abs() <= two_alpha);
        assert!(
            !self.consistent.is_empty(),
            "consistent set emptied by a hard query; a size-t approximating dataset must survive"
        );
        Ok(TranscriptEntry {
            label: q.label().to_string(),
            a_pub,
            a_priv,
            answer,
            hard: true,
        })
    }
}

/// Required dataset size for answering `m` queries over a domain of
/// `domain_size` elements to accuracy `tau` with failure probability `beta`:
/// `ceil(81 log2|X| log2(m) ln(3m/tau) / (2 tau^4) + 9 ln(2m/beta) / (2 tau^2))`.
pub fn mm_sample_bound(domain_size: u64, m: u64, tau: f64, beta: f64) -> Result<u64> {
    if domain_size < 2 || m < 2 {
        return Err(Error::InvalidParameter("need |X| >= 2 and m >= 2".into()));
    }
    if !(tau > 0.0 && tau <= 1.0) || !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter("need tau in (0,1] and beta in (0,1)".into()));
    }
    let x = domain_size as f64;
    let mf = m as f64;
    let lead = 81.0 * x.log2() * mf.log2() * (3.0 * mf / tau).ln() / (2.0 * tau.powi(4));
    let tail = 9.0 * (2.0 * mf / beta).ln() / (2.0 * tau * tau);
    Ok((lead + tail).ceil() as u64)
}

/// A deterministic analyst: produces the next query from the transcript
/// prefix (labels and answers of all earlier queries), or `None` when done.
pub type AnalystReplayer<'a, T> =
    dyn FnMut(&[(String, f64)]) -> Option<StatisticalQuery<T>> + 'a;

/// Drive a live session with an analyst, returning the full transcript.
pub fn mm_run_session<T>(
    mm: &mut MedianMechanism<T>,
    s: &[T],
    analyst: &mut AnalystReplayer<'_, T>,
) -> Result<Vec<TranscriptEntry>> {
    let mut transcript = Vec::new();
    let mut prefix: Vec<(String, f64)> = Vec::new();
    while transcript.len() < mm.m as usize {
        let Some(q) = analyst(&prefix) else { break };
        let entry = mm.answer_entry(&q, s)?;
        prefix.push((entry.label.clone(), entry.answer));
        transcript.push(entry);
    }
    Ok(transcript)
}

/// Rebuild the full (query, answer) transcript from the hard records alone,
/// replaying the analyst against a reconstructed candidate set. No access
/// to the real dataset is needed: median answers are recomputed, hard
/// answers come from the record.
pub fn mm_reconstruct_transcript<T>(
    hard_records: &[HardRecord],
    analyst: &mut AnalystReplayer<'_, T>,
    domain: Vec<T>,
    m: u64,
    tau: f64,
) -> Result<Vec<(String, f64)>> {
    for w in hard_records.windows(2) {
        if w[1].index <= w[0].index {
            return Err(Error::Reconstruction(format!(
                "hard records out of order at index {}",
                w[1].index
            )));
        }
    }
    let mut mm = MedianMechanism::with_cap(domain, m, tau, DEFAULT_MULTISET_CAP)?;
    let mut next_hard = 0usize;
    let mut transcript: Vec<(String, f64)> = Vec::new();
    for index in 0..m {
        let Some(q) = analyst(&transcript) else { break };
        let values = mm.query_values(&q);
        let answer = if next_hard < hard_records.len() && hard_records[next_hard].index == index {
            let rec = hard_records[next_hard];
            next_hard += 1;
            let two_alpha = 2.0 * mm.alpha;
            let tf = mm.t as f64;
            mm.consistent.retain(|c| (rec.answer - c.mean(&values, tf)).abs() <= two_alpha);
            if mm.consistent.is_empty() {
                return Err(Error::Reconstruction(format!(
                    "pruning on recorded query {index} emptied the candidate set"
                )));
            }
            rec.answer
        } else {
            mm.public_answer(&values)
        };
        transcript.push((q.label().to_string(), answer));
    }
    if next_hard < hard_records.len() {
        return Err(Error::Reconstruction(format!(
            "record at index {} beyond the replayed session",
            hard_records[next_hard].index
        )));
    }
    Ok(transcript)
}
