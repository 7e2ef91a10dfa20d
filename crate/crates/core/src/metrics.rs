//! Regret and queue-length measurement.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::net::{Matching, NetworkGraph};
use crate::oracle::{max_weight_matching, near_optimal_set, OracleError, BRANCH_AND_BOUND_LIMIT};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("exact optimum unavailable: {links} links exceeds {limit} and the exact solver is gated off")]
    OracleUnavailable { links: usize, limit: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// `r*_w`, the weight of an optimal matching. Graphs with more than
/// [`BRANCH_AND_BOUND_LIMIT`] links need `allow_large`.
pub fn frame_optimum(g: &NetworkGraph, w: &[f64], allow_large: bool) -> Result<f64, MetricsError> {
    if g.link_count() > BRANCH_AND_BOUND_LIMIT && !allow_large {
        return Err(MetricsError::OracleUnavailable {
            links: g.link_count(),
            limit: BRANCH_AND_BOUND_LIMIT,
        });
    }
    Ok(max_weight_matching(g, w).1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretSample {
    pub t: u64,
    pub regret: f64,
    pub alpha_regret: f64,
    pub normalized_regret: f64,
}

/// Per-frame accumulator of true schedule weight against the frame optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretAccumulator {
    r_star: f64,
    t: u64,
    reward: f64,
}

impl RegretAccumulator {
    pub fn new(r_star: f64) -> Self {
        Self {
            r_star,
            t: 0,
            reward: 0.0,
        }
    }

    /// Starts a new frame with optimum `r_star`; regret restarts at 0.
    pub fn reset(&mut self, r_star: f64) {
        *self = Self::new(r_star);
    }

    /// Records one slot whose schedule is worth `value` under true weights.
    pub fn record(&mut self, value: f64) {
        self.t += 1;
        self.reward += value;
    }

    pub fn record_schedule(&mut self, schedule: &Matching, w: &[f64]) {
        self.record(schedule.weight(w));
    }

    pub fn r_star(&self) -> f64 {
        self.r_star
    }

    pub fn slots(&self) -> u64 {
        self.t
    }

    pub fn reward(&self) -> f64 {
        self.reward
    }

    pub fn sample(&self, alpha: f64) -> RegretSample {
        regret_sample(self, self.t, alpha)
    }
}

/// `Reg^α(t) = t·α·r* − Σ r_w(S_τ)`, plain regret (α = 1), and plain regret
/// divided by `r*` (0 when `r* = 0`). `t` is the number of slots recorded.
pub fn regret_sample(acc: &RegretAccumulator, t: u64, alpha: f64) -> RegretSample {
    let regret = t as f64 * acc.r_star - acc.reward;
    RegretSample {
        t,
        regret,
        alpha_regret: t as f64 * alpha * acc.r_star - acc.reward,
        normalized_regret: if acc.r_star > 0.0 { regret / acc.r_star } else { 0.0 },
    }
}

/// In-frame checkpoints `10², 10³, …` below `frame_len`, refined to
/// `per_decade` log-spaced points per decade, followed by `frame_len`.
pub fn log_checkpoints(frame_len: u64, per_decade: u32) -> Vec<u64> {
    let per_decade = per_decade.max(1);
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let t = 10f64.powf(2.0 + i as f64 / per_decade as f64).round() as u64;
        if t >= frame_len {
            break;
        }
        if out.last() != Some(&t) {
            out.push(t);
        }
        i += 1;
    }
    out.push(frame_len);
    out
}

/// End-of-run queue figures of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunQueueSummary {
    pub end_total: u64,
    pub max_queue: u64,
}

/// Summary of a trace of per-slot queue vectors.
pub fn queue_stats<'a, I>(trace: I) -> RunQueueSummary
where
    I: IntoIterator<Item = &'a [u64]>,
{
    let mut s = RunQueueSummary {
        end_total: 0,
        max_queue: 0,
    };
    for q in trace {
        s.end_total = q.iter().sum();
        s.max_queue = s.max_queue.max(q.iter().copied().max().unwrap_or(0));
    }
    s
}

/// One line of the stability table.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRecord {
    pub policy: String,
    pub lambda: f64,
    pub run: u32,
    pub end_total_queue: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilitySummary {
    pub policy: String,
    pub lambda: f64,
    pub runs: usize,
    pub mean_end_total: f64,
    pub max_end_total: u64,
}

/// Arithmetic mean of end totals per `(policy, λ)`, in first-seen policy
/// order and ascending λ.
pub fn average_by_load(records: &[StabilityRecord]) -> Vec<StabilitySummary> {
    let mut policies: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<(usize, u64), (f64, Vec<u64>)> = BTreeMap::new();
    for r in records {
        let p = match policies.iter().position(|&p| p == r.policy) {
            Some(p) => p,
            None => {
                policies.push(&r.policy);
                policies.len() - 1
            }
        };
        groups
            .entry((p, r.lambda.to_bits()))
            .or_insert_with(|| (r.lambda, Vec::new()))
            .1
            .push(r.end_total_queue);
    }
    let mut out: Vec<StabilitySummary> = groups
        .into_iter()
        .map(|((p, _), (lambda, totals))| StabilitySummary {
            policy: policies[p].to_string(),
            lambda,
            runs: totals.len(),
            mean_end_total: totals.iter().sum::<u64>() as f64 / totals.len() as f64,
            max_end_total: totals.iter().copied().max().unwrap_or(0),
        })
        .collect();
    out.sort_by(|a, b| {
        let pa = policies.iter().position(|&p| p == a.policy);
        let pb = policies.iter().position(|&p| p == b.policy);
        pa.cmp(&pb).then(a.lambda.total_cmp(&b.lambda))
    });
    out
}

/// Smallest and largest shortfall `α·r* − r_w(S)` over matchings outside the
/// α-near-optimal set, or `None` when every matching is inside.
pub fn gap_diagnostics(g: &NetworkGraph, w: &[f64], alpha: f64) -> Result<Option<(f64, f64)>, MetricsError> {
    let set = near_optimal_set(g, w, alpha)?;
    let target = alpha * set.r_star;
    Ok(set
        .outside
        .iter()
        .map(|m| target - m.weight(w))
        .fold(None, |acc, d| match acc {
            None => Some((d, d)),
            Some((lo, hi)) => Some((f64::min(lo, d), f64::max(hi, d))),
        }))
}
