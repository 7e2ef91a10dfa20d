use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::net::{grid_topology, random_topology, read_edge_list, ring_topology, NetworkGraph};
use crate::oracle::BRANCH_AND_BOUND_LIMIT;
use crate::rng::{derive_seed, label};
use crate::sched::PolicyKind;
use crate::traffic::{ring_initial_queues, uniform_rates, RewardModel, TrafficModel};

use super::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

/// A complete experiment description. See `docs/config.md` for the schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub name: String,
    /// Master seed; every other seed is derived from it.
    pub seed: u64,
    pub runs: u32,
    /// Frame length T in slots.
    pub frame_len: u64,
    /// Frame lengths to sweep. When non-empty it replaces `frame_len`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frame_sweep: Vec<u64>,
    /// Slots per run.
    pub horizon: u64,
    /// When positive, each run lasts this many frames instead of `horizon` slots.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub horizon_frames: u64,
    pub topology: TopologySpec,
    pub traffic: TrafficSpec,
    pub policies: Vec<PolicySpec>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub toggles: Toggles,
}

fn is_zero(x: &u64) -> bool {
    *x == 0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologySpec {
    Grid { rows: usize, cols: usize },
    Ring { n: usize },
    Random {
        nodes: usize,
        links: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// Edge-list file.
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficSpec {
    /// Arrival-rate scales to sweep. Link `i` receives `λ·ρ_i`.
    pub lambda: Vec<f64>,
    /// Range of the per-link multiplier `ρ_i`; all ones when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<[f64; 2]>,
    /// Range of the service rates `μ_i`. Equal endpoints give a constant.
    pub mu: [f64; 2],
    /// Seed for `μ` and `ρ`; derived from the master seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_seed: Option<u64>,
    #[serde(default)]
    pub initial_queues: InitialQueues,
    #[serde(default)]
    pub reward: RewardSpec,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialQueues {
    #[default]
    Zero,
    /// `(3T/6, 2T/6, T/6)` repeated; six-link networks only.
    Ring,
    #[serde(untagged)]
    Explicit(Vec<u64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RewardSpec {
    #[default]
    Bernoulli,
    Uniform { spread: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicySpec {
    Akucb { k: usize, p: f64 },
    Dakucb { k: usize, p: f64 },
    Gmm,
    Mwm,
}

impl From<PolicySpec> for PolicyKind {
    fn from(p: PolicySpec) -> Self {
        match p {
            PolicySpec::Akucb { k, p } => PolicyKind::AkUcb { k, p },
            PolicySpec::Dakucb { k, p } => PolicyKind::DistAkUcb { k, p },
            PolicySpec::Gmm => PolicyKind::UcbGmm,
            PolicySpec::Mwm => PolicyKind::MwmGenie,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Write one regret CSV per policy.
    pub regret: bool,
    /// Write the end-of-run queue table.
    pub stability: bool,
    /// Record the total queue every this many slots (0 disables).
    pub queue_trace_every: u64,
    /// Regret samples per decade of in-frame slots.
    pub checkpoints_per_decade: u32,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            regret: false,
            stability: true,
            queue_trace_every: 0,
            checkpoints_per_decade: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Toggles {
    /// Start each frame's augmentation chain from the empty schedule.
    pub reset_s_prev_each_frame: bool,
    /// Report channel outcomes of scheduled links with empty queues.
    pub observe_empty_queues: bool,
    /// Permit exact max-weight matching on graphs above the small-graph limit.
    pub exact_mwm_large: bool,
}

impl Default for Toggles {
    fn default() -> Self {
        Self {
            reset_s_prev_each_frame: true,
            observe_empty_queues: true,
            exact_mwm_large: false,
        }
    }
}

/// Everything a run needs that is shared by all runs of an experiment.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub graph: NetworkGraph,
    pub mu: Vec<f64>,
    pub rho: Vec<f64>,
    pub frame_lens: Vec<u64>,
    pub policies: Vec<PolicyKind>,
}

impl Prepared {
    pub fn traffic(&self, cfg: &ExperimentConfig, lambda: f64) -> Result<TrafficModel, HarnessError> {
        let lambda_vec = self.rho.iter().map(|r| lambda * r).collect();
        let mut tm = TrafficModel::new(lambda_vec, self.mu.clone()).map_err(|e| HarnessError::Config(e.to_string()))?;
        tm.reward = match cfg.traffic.reward {
            RewardSpec::Bernoulli => RewardModel::Bernoulli,
            RewardSpec::Uniform { spread } => RewardModel::Uniform { spread },
        };
        Ok(tm)
    }

    pub fn initial_queues(&self, cfg: &ExperimentConfig, frame_len: u64) -> Vec<u64> {
        match &cfg.traffic.initial_queues {
            InitialQueues::Zero => vec![0; self.graph.link_count()],
            InitialQueues::Ring => ring_initial_queues(frame_len),
            InitialQueues::Explicit(q) => q.clone(),
        }
    }

    pub fn horizon(&self, cfg: &ExperimentConfig, frame_len: u64) -> u64 {
        if cfg.horizon_frames > 0 {
            cfg.horizon_frames * frame_len
        } else {
            cfg.horizon
        }
    }
}

fn bad(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

fn check_range(what: &str, r: [f64; 2]) -> Result<(), HarnessError> {
    if !(0.0 <= r[0] && r[0] <= r[1] && r[1] <= 1.0) {
        return Err(bad(format!("{what} range {r:?} must satisfy 0 <= lo <= hi <= 1")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let value: toml::Table = text.parse().map_err(|e: toml::de::Error| bad(e.to_string()))?;
        Self::from_table(value)
    }

    pub fn from_table(table: toml::Table) -> Result<Self, HarnessError> {
        match table.get("schema_version") {
            Some(toml::Value::Integer(v)) if *v == SCHEMA_VERSION as i64 => {}
            Some(v) => return Err(bad(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}"))),
            None => return Err(bad("missing schema_version")),
        }
        toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| bad(e.to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies `key=value` overrides, where `key` is a dotted path and
    /// `value` is a TOML value. Bare words are read as strings.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self, HarnessError> {
        let mut table = toml::Table::try_from(self).expect("config serializes");
        for o in overrides {
            let (key, raw) = o.split_once('=').ok_or_else(|| bad(format!("override `{o}` is not key=value")))?;
            let value = parse_value(raw.trim());
            set_path(&mut table, key.trim(), value)?;
        }
        Self::from_table(table)
    }

    /// Checks the configuration and builds the shared network and rates.
    pub fn prepare(&self) -> Result<Prepared, HarnessError> {
        if self.runs == 0 {
            return Err(bad("runs must be at least 1"));
        }
        if self.policies.is_empty() {
            return Err(bad("no policies configured"));
        }
        if self.traffic.lambda.is_empty() {
            return Err(bad("traffic.lambda is empty"));
        }
        let frame_lens = if self.frame_sweep.is_empty() {
            vec![self.frame_len]
        } else {
            self.frame_sweep.clone()
        };
        if frame_lens.contains(&0) {
            return Err(bad("frame lengths must be positive"));
        }
        if self.horizon_frames == 0 && self.horizon == 0 {
            return Err(bad("horizon must be positive"));
        }
        let graph = match &self.topology {
            TopologySpec::Grid { rows, cols } => {
                if *rows == 0 || *cols == 0 {
                    return Err(bad("grid dimensions must be positive"));
                }
                grid_topology(*rows, *cols)
            }
            TopologySpec::Ring { n } => ring_topology(*n)?,
            TopologySpec::Random { nodes, links, seed } => {
                random_topology(*nodes, *links, seed.unwrap_or_else(|| derive_seed(self.seed, &[label::TOPOLOGY])))?
            }
            TopologySpec::File { path } => {
                let f = std::fs::File::open(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
                read_edge_list(std::io::BufReader::new(f))?
            }
        };
        let n = graph.link_count();
        if n == 0 {
            return Err(bad("network has no links"));
        }
        check_range("traffic.mu", self.traffic.mu)?;
        let rate_seed = self.traffic.rate_seed.unwrap_or_else(|| derive_seed(self.seed, &[label::RATES]));
        let [lo, hi] = self.traffic.mu;
        let mu = uniform_rates(rate_seed, &[label::RATES], n, lo, hi);
        let rho = match self.traffic.rho {
            Some(r) => {
                check_range("traffic.rho", r)?;
                uniform_rates(rate_seed, &[label::ARRIVALS], n, r[0], r[1])
            }
            None => vec![1.0; n],
        };
        for &l in &self.traffic.lambda {
            if !(0.0..=1.0).contains(&l) || rho.iter().any(|r| l * r > 1.0) {
                return Err(bad(format!("arrival rate scale {l} gives probabilities outside [0, 1]")));
            }
        }
        match &self.traffic.initial_queues {
            InitialQueues::Ring if n != 6 => return Err(bad("ring initial queues need exactly six links")),
            InitialQueues::Explicit(q) if q.len() != n => {
                return Err(bad(format!("initial_queues has {} entries for {n} links", q.len())))
            }
            _ => {}
        }
        if let RewardSpec::Uniform { spread } = self.traffic.reward {
            if !(0.0..=1.0).contains(&spread) {
                return Err(bad("reward spread must lie in [0, 1]"));
            }
        }
        let policies: Vec<PolicyKind> = self.policies.iter().map(|&p| p.into()).collect();
        for p in &policies {
            p.validate()?;
        }
        let needs_exact = self.output.regret || policies.contains(&PolicyKind::MwmGenie);
        if needs_exact && n > BRANCH_AND_BOUND_LIMIT && !self.toggles.exact_mwm_large {
            return Err(HarnessError::OracleGuard {
                links: n,
                limit: BRANCH_AND_BOUND_LIMIT,
            });
        }
        Ok(Prepared {
            graph,
            mu,
            rho,
            frame_lens,
            policies,
        })
    }
}

fn parse_value(raw: &str) -> toml::Value {
    let wrapped = format!("v = {raw}");
    match wrapped.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

fn set_path(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<(), HarnessError> {
    let mut parts = key.split('.').peekable();
    let mut cur = table;
    while let Some(part) = parts.next() {
        if part.is_empty() {
            return Err(bad(format!("bad override key `{key}`")));
        }
        if parts.peek().is_none() {
            cur.insert(part.to_string(), value);
            return Ok(());
        }
        let entry = cur
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(bad(format!("override `{key}`: `{part}` is not a section"))),
        };
    }
    Err(bad(format!("bad override key `{key}`")))
}
