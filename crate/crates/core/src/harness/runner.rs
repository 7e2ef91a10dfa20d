use crate::bandit::{true_weight_vector, FrameContext};
use crate::metrics::{frame_optimum, log_checkpoints, regret_sample, RegretAccumulator, RegretSample};
use crate::net::{Matching, NetworkGraph};
use crate::rng::{derive_seed, label};
use crate::sched::{PolicyKind, Scheduler};
use crate::traffic::{step_queues, QueueState, TrafficModel, TrafficStreams};

use super::config::{ExperimentConfig, Prepared, Toggles};
use super::HarnessError;

/// Seed of the sample path `(run, λ index, frame-length index)`. Arrivals,
/// channel states, and protocol choices are keyed by it and by nothing that
/// depends on the policy, so all policies see common random numbers.
pub fn path_seed(master: u64, run: u32, lambda_idx: usize, frame_idx: usize) -> u64 {
    derive_seed(master, &[label::RUN, run as u64, lambda_idx as u64, frame_idx as u64])
}

/// Inputs of one simulated run.
#[derive(Debug, Clone)]
pub struct RunInput<'a> {
    pub graph: &'a NetworkGraph,
    pub traffic: &'a TrafficModel,
    pub initial_queues: Vec<u64>,
    pub frame_len: u64,
    pub horizon: u64,
    pub policy: PolicyKind,
    pub seed: u64,
    pub toggles: Toggles,
    /// Compute the frame optimum and regret samples at these in-frame slots.
    pub regret_checkpoints: Option<Vec<u64>>,
    pub allow_large_oracle: bool,
    /// Record the total queue every this many slots (0 disables).
    pub trace_every: u64,
}

/// What an observer sees after each slot.
pub struct SlotView<'a> {
    pub slot: u64,
    pub ctx: FrameContext,
    pub schedule: &'a Matching,
    /// Queues after the slot's service and arrivals.
    pub queues: &'a [u64],
    /// True frame weights `(q_i(t_n)/q*)·μ_i`.
    pub frame_weights: &'a [f64],
    pub r_star: Option<f64>,
    pub scheduler: &'a Scheduler,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretPoint {
    pub frame: u64,
    pub sample: RegretSample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub end_total: u64,
    pub max_queue: u64,
    pub regret: Vec<RegretPoint>,
    /// `(slot, total queue)`, starting with slot 0.
    pub trace: Vec<(u64, u64)>,
}

pub fn simulate_run(input: &RunInput<'_>, observer: Option<&mut dyn FnMut(&SlotView<'_>)>) -> Result<RunOutput, HarnessError> {
    let mut observer = observer;
    let g = input.graph;
    let n = g.link_count();
    if input.initial_queues.len() != n {
        return Err(HarnessError::Config("initial queue vector does not match the network".into()));
    }
    let mut sched = Scheduler::new(g, input.policy, input.frame_len, input.seed, input.toggles.reset_s_prev_each_frame)?;
    let mut streams = TrafficStreams::new(input.seed);
    let mut qs = QueueState::new(input.initial_queues.clone());
    let mut acc = RegretAccumulator::new(0.0);
    let mut weights = vec![0.0; n];
    let mut r_star = None;
    let mut out = RunOutput {
        end_total: 0,
        max_queue: qs.max(),
        regret: Vec::new(),
        trace: Vec::new(),
    };
    if input.trace_every > 0 {
        out.trace.push((0, qs.total()));
    }
    let checkpoints = input.regret_checkpoints.as_deref();
    let mut next_cp = 0usize;
    for slot in 1..=input.horizon {
        let ctx = FrameContext::at(slot, input.frame_len, n);
        if ctx.t == 1 {
            weights = true_weight_vector(&qs.q, input.traffic.mu.as_slice());
            if checkpoints.is_some() {
                let r = frame_optimum(g, &weights, input.allow_large_oracle)?;
                r_star = Some(r);
                acc.reset(r);
                next_cp = 0;
            }
        }
        let schedule = sched.select(g, slot, &qs.q, &input.traffic.mu)?;
        let step = step_queues(&mut qs, &schedule, input.traffic, &mut streams, input.toggles.observe_empty_queues);
        sched.observe(&step.observations)?;
        if let Some(cps) = checkpoints {
            acc.record_schedule(&schedule, &weights);
            let frame_end = ctx.t == input.frame_len || slot == input.horizon;
            while next_cp < cps.len() && cps[next_cp] < ctx.t {
                next_cp += 1;
            }
            if (next_cp < cps.len() && cps[next_cp] == ctx.t) || frame_end {
                out.regret.push(RegretPoint {
                    frame: ctx.frame,
                    sample: regret_sample(&acc, ctx.t, input.policy.alpha()),
                });
                if next_cp < cps.len() && cps[next_cp] == ctx.t {
                    next_cp += 1;
                }
            }
        }
        out.max_queue = out.max_queue.max(qs.max());
        if input.trace_every > 0 && slot % input.trace_every == 0 {
            out.trace.push((slot, qs.total()));
        }
        if let Some(obs) = observer.as_deref_mut() {
            obs(&SlotView {
                slot,
                ctx,
                schedule: &schedule,
                queues: &qs.q,
                frame_weights: &weights,
                r_star,
                scheduler: &sched,
            });
        }
    }
    out.end_total = qs.total();
    Ok(out)
}

/// One cell of the experiment grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Job {
    pub frame_idx: usize,
    pub lambda_idx: usize,
    pub policy_idx: usize,
    pub run: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobResult {
    pub job: Job,
    pub frame_len: u64,
    pub lambda: f64,
    pub policy: PolicyKind,
    pub output: RunOutput,
}

/// All jobs in output order: frame length, then λ, then policy, then run.
pub fn jobs(cfg: &ExperimentConfig, prep: &Prepared) -> Vec<Job> {
    let mut out = Vec::new();
    for frame_idx in 0..prep.frame_lens.len() {
        for lambda_idx in 0..cfg.traffic.lambda.len() {
            for policy_idx in 0..prep.policies.len() {
                for run in 0..cfg.runs {
                    out.push(Job {
                        frame_idx,
                        lambda_idx,
                        policy_idx,
                        run,
                    });
                }
            }
        }
    }
    out
}

pub fn run_job(cfg: &ExperimentConfig, prep: &Prepared, job: Job) -> Result<JobResult, HarnessError> {
    let frame_len = prep.frame_lens[job.frame_idx];
    let lambda = cfg.traffic.lambda[job.lambda_idx];
    let policy = prep.policies[job.policy_idx];
    let traffic = prep.traffic(cfg, lambda)?;
    let input = RunInput {
        graph: &prep.graph,
        traffic: &traffic,
        initial_queues: prep.initial_queues(cfg, frame_len),
        frame_len,
        horizon: prep.horizon(cfg, frame_len),
        policy,
        seed: path_seed(cfg.seed, job.run, job.lambda_idx, job.frame_idx),
        toggles: cfg.toggles.clone(),
        regret_checkpoints: cfg
            .output
            .regret
            .then(|| log_checkpoints(frame_len, cfg.output.checkpoints_per_decade)),
        allow_large_oracle: cfg.toggles.exact_mwm_large,
        trace_every: cfg.output.queue_trace_every,
    };
    Ok(JobResult {
        job,
        frame_len,
        lambda,
        policy,
        output: simulate_run(&input, None)?,
    })
}

/// Runs every job on `threads` workers (0 picks the number of CPUs) and
/// returns results in job order.
pub fn run_all(cfg: &ExperimentConfig, prep: &Prepared, threads: usize) -> Result<Vec<JobResult>, HarnessError> {
    let all = jobs(cfg, prep);
    run_jobs(cfg, prep, &all, threads)
}

#[cfg(feature = "parallel")]
fn run_jobs(cfg: &ExperimentConfig, prep: &Prepared, all: &[Job], threads: usize) -> Result<Vec<JobResult>, HarnessError> {
    use rayon::prelude::*;
    if threads == 1 {
        return all.iter().map(|&j| run_job(cfg, prep, j)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    pool.install(|| all.par_iter().map(|&j| run_job(cfg, prep, j)).collect())
}

#[cfg(not(feature = "parallel"))]
fn run_jobs(cfg: &ExperimentConfig, prep: &Prepared, all: &[Job], _threads: usize) -> Result<Vec<JobResult>, HarnessError> {
    all.iter().map(|&j| run_job(cfg, prep, j)).collect()
}
