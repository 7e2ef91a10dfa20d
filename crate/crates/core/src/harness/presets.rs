use crate::traffic::{RANDOM_FRAME, RANDOM_LINKS, RANDOM_NODES, RING_FRAME};

use super::config::{
    ExperimentConfig, InitialQueues, OutputSpec, PolicySpec, RewardSpec, Toggles, TopologySpec, TrafficSpec,
    SCHEMA_VERSION,
};

/// Service-rate seed of the grid experiments.
pub const GRID_RATE_SEED: u64 = 8;
/// Topology and rate seed of the random-network experiment.
pub const RANDOM_NETWORK_SEED: u64 = 3;
pub const SEED_PROBABILITY: f64 = 0.2;
pub const RING_EPSILON: f64 = 0.08;

pub const PRESET_NAMES: &[&str] = &[
    "fig_regret_grid",
    "fig_regret_grid_desk",
    "fig_stability_grid",
    "fig_stability_grid_desk",
    "fig_frame_sweep",
    "fig_frame_sweep_desk",
    "fig_ring",
    "fig_ring_desk",
    "fig_random",
    "fig_random_desk",
];

pub const STABILITY_LAMBDAS: &[f64] = &[0.06, 0.065, 0.07, 0.075, 0.08, 0.084, 0.088, 0.09, 0.092, 0.095, 0.1];
pub const FRAME_SWEEP_LAMBDAS: &[f64] = &[0.07, 0.075, 0.08, 0.084, 0.088, 0.09, 0.095];
pub const RANDOM_LAMBDAS: &[f64] = &[0.05, 0.1, 0.15, 0.2, 0.25, 0.3];

fn akucb(k: usize) -> PolicySpec {
    PolicySpec::Akucb { k, p: SEED_PROBABILITY }
}

fn dakucb(k: usize) -> PolicySpec {
    PolicySpec::Dakucb { k, p: SEED_PROBABILITY }
}

fn grid_traffic(lambda: &[f64]) -> TrafficSpec {
    TrafficSpec {
        lambda: lambda.to_vec(),
        rho: None,
        mu: [0.25, 0.75],
        rate_seed: Some(GRID_RATE_SEED),
        initial_queues: InitialQueues::Zero,
        reward: RewardSpec::Bernoulli,
    }
}

fn base(name: &str, frame_len: u64, horizon: u64, runs: u32, topology: TopologySpec, traffic: TrafficSpec, policies: Vec<PolicySpec>) -> ExperimentConfig {
    ExperimentConfig {
        schema_version: SCHEMA_VERSION,
        name: name.to_string(),
        seed: 1,
        runs,
        frame_len,
        frame_sweep: Vec::new(),
        horizon,
        horizon_frames: 0,
        topology,
        traffic,
        policies,
        output: OutputSpec::default(),
        toggles: Toggles::default(),
    }
}

const GRID: TopologySpec = TopologySpec::Grid { rows: 4, cols: 4 };

/// The named preset, or `None` for an unknown name. Names ending in `_desk`
/// are reduced versions sized for a workstation.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let (stem, desk) = match name.strip_suffix("_desk") {
        Some(stem) => (stem, true),
        None => (name, false),
    };
    let cfg = match stem {
        "fig_regret_grid" => {
            let t = if desk { 100_000 } else { 1_000_000 };
            let mut c = base(
                name,
                t,
                t,
                10,
                GRID,
                grid_traffic(&[0.08]),
                vec![akucb(2), akucb(3), akucb(4), dakucb(2), dakucb(3), dakucb(4)],
            );
            c.output = OutputSpec {
                regret: true,
                stability: false,
                queue_trace_every: 0,
                checkpoints_per_decade: 10,
            };
            c
        }
        "fig_stability_grid" => base(
            name,
            5000,
            if desk { 200_000 } else { 1_000_000 },
            if desk { 5 } else { 10 },
            GRID,
            grid_traffic(STABILITY_LAMBDAS),
            vec![
                PolicySpec::Mwm,
                PolicySpec::Gmm,
                akucb(2),
                akucb(3),
                akucb(4),
                dakucb(2),
                dakucb(3),
                dakucb(4),
            ],
        ),
        "fig_frame_sweep" => {
            let mut c = base(name, 5000, 0, if desk { 5 } else { 10 }, GRID, grid_traffic(FRAME_SWEEP_LAMBDAS), vec![akucb(3)]);
            c.frame_sweep = if desk {
                vec![1_000, 10_000, 50_000, 100_000, 200_000]
            } else {
                vec![10_000, 100_000, 500_000, 1_000_000, 2_000_000]
            };
            c.horizon_frames = 10;
            c
        }
        "fig_ring" => {
            let mut c = base(
                name,
                RING_FRAME,
                if desk { 300_000 } else { 3_000_000 },
                if desk { 5 } else { 10 },
                TopologySpec::Ring { n: 6 },
                TrafficSpec {
                    lambda: vec![1.0 / 6.0 + RING_EPSILON],
                    rho: None,
                    mu: [0.5, 0.5],
                    rate_seed: None,
                    initial_queues: InitialQueues::Ring,
                    reward: RewardSpec::Bernoulli,
                },
                vec![akucb(3), dakucb(3), PolicySpec::Gmm],
            );
            c.output.queue_trace_every = RING_FRAME / 10;
            c
        }
        "fig_random" => {
            let mut c = base(
                name,
                RANDOM_FRAME,
                0,
                if desk { 5 } else { 10 },
                TopologySpec::Random {
                    nodes: RANDOM_NODES,
                    links: RANDOM_LINKS,
                    seed: Some(RANDOM_NETWORK_SEED),
                },
                TrafficSpec {
                    lambda: RANDOM_LAMBDAS.to_vec(),
                    rho: Some([0.4, 0.7]),
                    mu: [0.25, 0.75],
                    rate_seed: Some(RANDOM_NETWORK_SEED),
                    initial_queues: InitialQueues::Zero,
                    reward: RewardSpec::Bernoulli,
                },
                vec![PolicySpec::Gmm, dakucb(3), dakucb(6), dakucb(9)],
            );
            c.horizon_frames = if desk { 100 } else { 1000 };
            c
        }
        _ => return None,
    };
    Some(cfg)
}
