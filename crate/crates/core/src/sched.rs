//! The four per-slot scheduling policies: A^k-UCB, its distributed variant,
//! UCB-based greedy maximal matching, and the max-weight genie.

use std::fmt;

use thiserror::Error;

use crate::augment::{
    run_augmentation_round, run_augmentation_round_distributed, LinkView, RoundConfig, RoundResult, SlotStreams,
};
use crate::bandit::{warmup_schedules, BanditError, FrameContext, LinkBanditState};
use crate::net::{LinkId, Matching, NetworkGraph};
use crate::oracle::{greedy_matching, max_weight_matching};

#[derive(Debug, Error, PartialEq)]
pub enum SchedError {
    #[error(transparent)]
    Bandit(#[from] BanditError),
    #[error("invalid policy parameters: {0}")]
    InvalidPolicy(String),
    #[error("frame length must be positive")]
    ZeroFrame,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicyKind {
    AkUcb { k: usize, p: f64 },
    DistAkUcb { k: usize, p: f64 },
    UcbGmm,
    MwmGenie,
}

impl PolicyKind {
    pub fn validate(&self) -> Result<(), SchedError> {
        match *self {
            PolicyKind::AkUcb { k, p } | PolicyKind::DistAkUcb { k, p } => {
                if k < 2 {
                    return Err(SchedError::InvalidPolicy(format!("k = {k}, need k >= 2")));
                }
                if !(p > 0.0 && p < 1.0) {
                    return Err(SchedError::InvalidPolicy(format!("p = {p}, need 0 < p < 1")));
                }
                Ok(())
            }
            PolicyKind::UcbGmm | PolicyKind::MwmGenie => Ok(()),
        }
    }

    /// Approximation ratio the policy's regret is measured against.
    pub fn alpha(&self) -> f64 {
        match *self {
            PolicyKind::AkUcb { k, .. } | PolicyKind::DistAkUcb { k, .. } => (k as f64 - 1.0) / (k as f64 + 1.0),
            PolicyKind::UcbGmm => 0.5,
            PolicyKind::MwmGenie => 1.0,
        }
    }

    /// Whether the policy learns in frames with a warm-up phase.
    pub fn is_learning(&self) -> bool {
        !matches!(self, PolicyKind::MwmGenie)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::AkUcb { k, .. } => write!(f, "A{k}-UCB"),
            PolicyKind::DistAkUcb { k, .. } => write!(f, "dA{k}-UCB"),
            PolicyKind::UcbGmm => f.write_str("UCB-GMM"),
            PolicyKind::MwmGenie => f.write_str("MWM"),
        }
    }
}

/// One A^k-UCB decision: augment `s_prev` using the current UCB indices.
pub fn akucb_slot(
    g: &NetworkGraph,
    ctx: &FrameContext,
    bandit: &LinkBanditState,
    s_prev: &Matching,
    cfg: &RoundConfig,
    streams: &mut SlotStreams,
) -> Result<RoundResult, SchedError> {
    let w = bandit.index_vector(ctx.t)?;
    Ok(run_augmentation_round(g, s_prev, &w, cfg, streams))
}

/// One dA^k-UCB decision. Nodes see only frame-start queues, empirical means,
/// and radii; `normalizers` carries each node's running queue maximum.
pub fn dist_akucb_slot(
    g: &NetworkGraph,
    ctx: &FrameContext,
    normalizers: &mut [f64],
    bandit: &LinkBanditState,
    s_prev: &Matching,
    cfg: &RoundConfig,
    streams: &mut SlotStreams,
) -> Result<RoundResult, SchedError> {
    let (queue, mean, radius) = bandit.local_view(ctx.t)?;
    let view = LinkView {
        queue: &queue,
        mean: &mean,
        radius: &radius,
    };
    Ok(run_augmentation_round_distributed(g, s_prev, view, normalizers, cfg, streams))
}

/// Each node starts the frame with the largest frame-start queue among its
/// incident links.
pub fn init_normalizers(g: &NetworkGraph, queues: &[u64]) -> Vec<f64> {
    (0..g.node_count())
        .map(|v| g.incident(v).iter().map(|&l| queues[l]).max().unwrap_or(0) as f64)
        .collect()
}

pub fn ucb_gmm_slot(g: &NetworkGraph, ctx: &FrameContext, bandit: &LinkBanditState) -> Result<Matching, SchedError> {
    Ok(greedy_matching(g, &bandit.index_vector(ctx.t)?))
}

/// Exact max-weight matching under weights `q_i(t) · μ_i`.
pub fn mwm_genie_slot(g: &NetworkGraph, queues: &[u64], mu: &[f64]) -> Matching {
    let w: Vec<f64> = queues.iter().zip(mu).map(|(&q, &m)| q as f64 * m).collect();
    max_weight_matching(g, &w).0
}

/// Stateful per-run driver for one policy.
#[derive(Debug, Clone)]
pub struct Scheduler {
    kind: PolicyKind,
    frame_len: u64,
    protocol_seed: u64,
    reset_s_prev: bool,
    bandit: LinkBanditState,
    warmup: Vec<Matching>,
    s_prev: Matching,
    normalizers: Vec<f64>,
    last_round: Option<RoundResult>,
}

impl Scheduler {
    /// `protocol_seed` keys the random choices of the augmentation protocol
    /// by global slot, so two schedulers given the same seed draw the same
    /// node decisions.
    pub fn new(
        g: &NetworkGraph,
        kind: PolicyKind,
        frame_len: u64,
        protocol_seed: u64,
        reset_s_prev: bool,
    ) -> Result<Self, SchedError> {
        kind.validate()?;
        if frame_len == 0 {
            return Err(SchedError::ZeroFrame);
        }
        Ok(Self {
            kind,
            frame_len,
            protocol_seed,
            reset_s_prev,
            bandit: LinkBanditState::new(g.link_count()),
            warmup: warmup_schedules(g),
            s_prev: Matching::empty(g),
            normalizers: vec![0.0; g.node_count()],
            last_round: None,
        })
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn bandit(&self) -> &LinkBanditState {
        &self.bandit
    }

    /// The schedule the next augmentation round starts from.
    pub fn s_prev(&self) -> &Matching {
        &self.s_prev
    }

    pub fn normalizers(&self) -> &[f64] {
        &self.normalizers
    }

    /// The augmentation round of the most recent slot, if one ran.
    pub fn last_round(&self) -> Option<&RoundResult> {
        self.last_round.as_ref()
    }

    pub fn context(&self, g: &NetworkGraph, global_slot: u64) -> FrameContext {
        FrameContext::at(global_slot, self.frame_len, g.link_count())
    }

    /// Snapshots frame-start queues and clears learning state.
    pub fn begin_frame(&mut self, g: &NetworkGraph, queues: &[u64]) -> Result<(), SchedError> {
        self.bandit.reset_frame(queues)?;
        if self.reset_s_prev {
            self.s_prev = Matching::empty(g);
        }
        self.normalizers = init_normalizers(g, queues);
        Ok(())
    }

    /// Schedule for global slot `global_slot` (1-based). Frame boundaries are
    /// handled here; `queues` are the current queue lengths and `mu` the true
    /// service rates, read only by the genie.
    pub fn select(
        &mut self,
        g: &NetworkGraph,
        global_slot: u64,
        queues: &[u64],
        mu: &[f64],
    ) -> Result<Matching, SchedError> {
        self.last_round = None;
        if !self.kind.is_learning() {
            return Ok(mwm_genie_slot(g, queues, mu));
        }
        let ctx = self.context(g, global_slot);
        if ctx.t == 1 {
            self.begin_frame(g, queues)?;
        }
        if ctx.in_warmup() {
            return Ok(self.warmup[(ctx.t - 1) as usize].clone());
        }
        let mut streams = SlotStreams::new(self.protocol_seed, global_slot, g.node_count());
        let round = match self.kind {
            PolicyKind::AkUcb { k, p } => {
                akucb_slot(g, &ctx, &self.bandit, &self.s_prev, &RoundConfig::new(p, k), &mut streams)?
            }
            PolicyKind::DistAkUcb { k, p } => dist_akucb_slot(
                g,
                &ctx,
                &mut self.normalizers,
                &self.bandit,
                &self.s_prev,
                &RoundConfig::new(p, k),
                &mut streams,
            )?,
            PolicyKind::UcbGmm => return ucb_gmm_slot(g, &ctx, &self.bandit),
            PolicyKind::MwmGenie => unreachable!(),
        };
        self.s_prev = round.schedule.clone();
        let schedule = round.schedule.clone();
        self.last_round = Some(round);
        Ok(schedule)
    }

    /// Feeds back the service outcome observed on each scheduled link.
    pub fn observe(&mut self, outcomes: &[(LinkId, f64)]) -> Result<(), SchedError> {
        if self.kind.is_learning() {
            for &(l, x) in outcomes {
                self.bandit.record_play(l, x)?;
            }
        }
        Ok(())
    }
}
