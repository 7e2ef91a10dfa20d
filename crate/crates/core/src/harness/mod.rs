//! Configuration, seeded run orchestration, presets, and CSV output.

mod check;
mod config;
mod output;
mod presets;
mod runner;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use check::{run_checks, CheckOutcome};
pub use config::{
    ExperimentConfig, InitialQueues, OutputSpec, PolicySpec, Prepared, RewardSpec, Toggles, TopologySpec, TrafficSpec,
    SCHEMA_VERSION,
};
pub use output::{policy_slugs, summary_table, write_outputs};
pub use presets::{
    preset, FRAME_SWEEP_LAMBDAS, GRID_RATE_SEED, PRESET_NAMES, RANDOM_LAMBDAS, RANDOM_NETWORK_SEED, RING_EPSILON,
    SEED_PROBABILITY, STABILITY_LAMBDAS,
};
pub use runner::{jobs, path_seed, run_all, run_job, simulate_run, Job, JobResult, RegretPoint, RunInput, RunOutput, SlotView};

use crate::metrics::MetricsError;
use crate::net::NetError;
use crate::sched::SchedError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("oracle-size guard: {links} links exceeds {limit}; set toggles.exact_mwm_large = true to allow")]
    OracleGuard { links: usize, limit: usize },
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Sched(#[from] SchedError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Result of [`run_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub results: Vec<JobResult>,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

/// Validates `cfg`, runs every job on `threads` workers, and writes the
/// artifacts to `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path, threads: usize) -> Result<ExperimentReport, HarnessError> {
    let prep = cfg.prepare()?;
    let results = run_all(cfg, &prep, threads)?;
    let files = write_outputs(cfg, &prep, &results, out_dir)?;
    Ok(ExperimentReport {
        summary: summary_table(cfg, &prep, &results),
        results,
        files,
    })
}
