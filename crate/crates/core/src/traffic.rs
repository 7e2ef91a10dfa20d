//! Bernoulli arrivals, single-packet service, and the queue recursion
//! `q ← [q − X]⁺ + a`.
//!
//! Every slot draws one arrival uniform and one service uniform per link,
//! whether or not the link is scheduled. Two policies simulated from the
//! same [`TrafficStreams`] therefore face identical arrivals and channel
//! states.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;
use thiserror::Error;

use crate::net::{random_topology, ring_topology, LinkId, Matching, NetError, NetworkGraph};
use crate::rng::{self, label};

#[derive(Debug, Error, PartialEq)]
pub enum TrafficError {
    #[error("{what} has {got} entries, expected {expected}")]
    Length { what: &'static str, expected: usize, got: usize },
    #[error("{what}[{index}] = {value} is outside [0, 1]")]
    OutOfRange { what: &'static str, index: usize, value: f64 },
    #[error("bad parameter: {0}")]
    BadParameter(&'static str),
}

/// Distribution of the per-slot service outcome `X_i` of a scheduled link.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RewardModel {
    /// `X ~ Bernoulli(μ)`; one packet leaves when `X = 1`.
    #[default]
    Bernoulli,
    /// `X ~ U[μ − spread, μ + spread]` clipped to `[0, 1]`; one packet leaves
    /// with probability `X`, so the mean departure is still about `μ`.
    Uniform { spread: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficModel {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub reward: RewardModel,
}

impl TrafficModel {
    pub fn new(lambda: Vec<f64>, mu: Vec<f64>) -> Result<Self, TrafficError> {
        if lambda.len() != mu.len() {
            return Err(TrafficError::Length {
                what: "mu",
                expected: lambda.len(),
                got: mu.len(),
            });
        }
        for (what, v) in [("lambda", &lambda), ("mu", &mu)] {
            if let Some((index, &value)) = v.iter().enumerate().find(|(_, x)| !(0.0..=1.0).contains(*x)) {
                return Err(TrafficError::OutOfRange { what, index, value });
            }
        }
        Ok(Self {
            lambda,
            mu,
            reward: RewardModel::Bernoulli,
        })
    }

    pub fn n_links(&self) -> usize {
        self.lambda.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueState {
    pub q: Vec<u64>,
    /// Slots simulated so far.
    pub t: u64,
}

impl QueueState {
    pub fn new(q: Vec<u64>) -> Self {
        Self { q, t: 0 }
    }

    pub fn zeros(n_links: usize) -> Self {
        Self::new(vec![0; n_links])
    }

    pub fn total(&self) -> u64 {
        self.q.iter().sum()
    }

    pub fn max(&self) -> u64 {
        self.q.iter().copied().max().unwrap_or(0)
    }
}

/// Per-run random streams for arrivals and channel states.
#[derive(Debug, Clone)]
pub struct TrafficStreams {
    arrivals: Pcg64Mcg,
    service: Pcg64Mcg,
    arrival_u: Vec<f64>,
    service_u: Vec<f64>,
    depart_u: Vec<f64>,
}

impl TrafficStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            arrivals: rng::stream(seed, &[label::ARRIVALS]),
            service: rng::stream(seed, &[label::SERVICE]),
            arrival_u: Vec::new(),
            service_u: Vec::new(),
            depart_u: Vec::new(),
        }
    }

    fn draw(&mut self, n: usize, reward: RewardModel) {
        self.arrival_u.clear();
        self.service_u.clear();
        self.depart_u.clear();
        for _ in 0..n {
            self.arrival_u.push(self.arrivals.random());
            self.service_u.push(self.service.random());
        }
        if let RewardModel::Uniform { .. } = reward {
            for _ in 0..n {
                self.depart_u.push(self.service.random());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepOutcome {
    /// `(link, X)` for every scheduled link that reported a service outcome.
    pub observations: Vec<(LinkId, f64)>,
    pub arrivals: u64,
    pub departures: u64,
}

/// Advances `qs` by one slot under `schedule`. With `observe_empty` unset,
/// scheduled links with an empty queue report nothing.
pub fn step_queues(
    qs: &mut QueueState,
    schedule: &Matching,
    tm: &TrafficModel,
    streams: &mut TrafficStreams,
    observe_empty: bool,
) -> StepOutcome {
    let n = tm.n_links();
    debug_assert_eq!(qs.q.len(), n);
    streams.draw(n, tm.reward);
    let mut out = StepOutcome::default();
    for l in schedule.links() {
        let u = streams.service_u[l];
        let (x, departs) = match tm.reward {
            RewardModel::Bernoulli => {
                let hit = u < tm.mu[l];
                (if hit { 1.0 } else { 0.0 }, hit)
            }
            RewardModel::Uniform { spread } => {
                let x = (tm.mu[l] + spread * (2.0 * u - 1.0)).clamp(0.0, 1.0);
                (x, streams.depart_u[l] < x)
            }
        };
        let had = qs.q[l] > 0;
        if had || observe_empty {
            out.observations.push((l, x));
        }
        if had && departs {
            qs.q[l] -= 1;
            out.departures += 1;
        }
    }
    for l in 0..n {
        if streams.arrival_u[l] < tm.lambda[l] {
            qs.q[l] += 1;
            out.arrivals += 1;
        }
    }
    qs.t += 1;
    out
}

/// `n` independent draws from `U[lo, hi]` on the stream keyed by `(seed, parts)`.
pub fn uniform_rates(seed: u64, parts: &[u64], n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut r = Pcg64Mcg::seed_from_u64(rng::derive_seed(seed, parts));
    (0..n).map(|_| r.random_range(lo..=hi)).collect()
}

/// Service rates drawn uniformly from `[0.25, 0.75]`.
pub fn draw_service_rates(n_links: usize, rate_seed: u64) -> Vec<f64> {
    uniform_rates(rate_seed, &[label::RATES], n_links, 0.25, 0.75)
}

/// Identical arrival rate `lambda` on every link, service rates from `rate_seed`.
pub fn make_grid_experiment_traffic(n_links: usize, lambda: f64, rate_seed: u64) -> Result<TrafficModel, TrafficError> {
    TrafficModel::new(vec![lambda; n_links], draw_service_rates(n_links, rate_seed))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub graph: NetworkGraph,
    pub traffic: TrafficModel,
    pub initial_queues: Vec<u64>,
    pub frame_len: u64,
}

pub const RING_FRAME: u64 = 6000;

/// Frame-start queues `(3T/6, 2T/6, T/6)` repeated around the ring.
pub fn ring_initial_queues(frame_len: u64) -> Vec<u64> {
    [3, 2, 1, 3, 2, 1].iter().map(|&m| m * frame_len / 6).collect()
}

/// The six-link ring on which greedy matching loses throughput: `μ = 1/2`,
/// `λ = 1/6 + ε`, unbalanced initial queues.
pub fn make_ring_experiment(eps: f64) -> Result<Experiment, TrafficError> {
    make_ring_experiment_with_frame(eps, RING_FRAME)
}

pub fn make_ring_experiment_with_frame(eps: f64, frame_len: u64) -> Result<Experiment, TrafficError> {
    if !(eps >= 0.0) || 1.0 / 6.0 + eps > 1.0 {
        return Err(TrafficError::BadParameter("ring epsilon must lie in [0, 5/6]"));
    }
    let graph = ring_topology(6).expect("six nodes form a ring");
    Ok(Experiment {
        graph,
        traffic: TrafficModel::new(vec![1.0 / 6.0 + eps; 6], vec![0.5; 6])?,
        initial_queues: ring_initial_queues(frame_len),
        frame_len,
    })
}

pub const RANDOM_NODES: usize = 50;
pub const RANDOM_LINKS: usize = 200;
pub const RANDOM_FRAME: u64 = 500;

/// Random 50-node, 200-link network with `λ_i = λ·ρ_i`, `ρ_i ~ U[0.4, 0.7]`.
pub fn make_random_network_experiment(lambda: f64, topology_seed: u64, rate_seed: u64) -> Result<Experiment, NetError> {
    let graph = random_topology(RANDOM_NODES, RANDOM_LINKS, topology_seed)?;
    let n = graph.link_count();
    let rho = uniform_rates(rate_seed, &[label::ARRIVALS], n, 0.4, 0.7);
    let traffic = TrafficModel {
        lambda: rho.iter().map(|r| (lambda * r).clamp(0.0, 1.0)).collect(),
        mu: draw_service_rates(n, rate_seed),
        reward: RewardModel::Bernoulli,
    };
    Ok(Experiment {
        initial_queues: vec![0; n],
        graph,
        traffic,
        frame_len: RANDOM_FRAME,
    })
}

/// Two-colouring of the nodes, if one exists.
pub fn bipartition(g: &NetworkGraph) -> Option<Vec<bool>> {
    let mut side: Vec<Option<bool>> = vec![None; g.node_count()];
    for root in 0..g.node_count() {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(false);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let s = side[v].expect("visited");
            for &l in g.incident(v) {
                let u = g.other_end(l, v);
                match side[u] {
                    None => {
                        side[u] = Some(!s);
                        stack.push(u);
                    }
                    Some(t) if t == s => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(side.into_iter().map(|s| s.expect("all visited")).collect())
}

/// Largest `λ` for which arrival rates `λ·ρ` lie in the capacity region,
/// `1 / max_v Σ_{i ∋ v} ρ_i/μ_i`. Exact only on bipartite graphs, where the
/// matching polytope is cut out by the node constraints, so other graphs
/// return `None`.
pub fn bipartite_capacity_scale(g: &NetworkGraph, rho: &[f64], mu: &[f64]) -> Option<f64> {
    bipartition(g)?;
    let load = (0..g.node_count())
        .map(|v| g.incident(v).iter().map(|&l| rho[l] / mu[l]).sum::<f64>())
        .fold(0.0, f64::max);
    Some(if load > 0.0 { 1.0 / load } else { f64::INFINITY })
}
