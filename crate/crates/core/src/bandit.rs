//! Per-link UCB statistics with frame-scoped queue weighting.

use thiserror::Error;

use crate::net::{LinkId, Matching, NetworkGraph};

#[derive(Debug, Error, PartialEq)]
pub enum BanditError {
    #[error("link {0} has not been played this frame")]
    Unplayed(LinkId),
    #[error("reward {0} outside [0, 1]")]
    RewardOutOfRange(f64),
    #[error("queue snapshot has {got} entries, expected {expected}")]
    QueueLength { expected: usize, got: usize },
}

/// `sqrt((links + 1) · ln t / plays)`.
pub fn confidence_radius(n_links: usize, t: u64, plays: f64) -> f64 {
    ((n_links as f64 + 1.0) * (t as f64).ln() / plays).sqrt()
}

/// Queue ratio `q / q*`, taken as 1 when `q* = 0`.
pub fn queue_ratio(q: u64, q_star: u64) -> f64 {
    if q_star == 0 {
        1.0
    } else {
        q as f64 / q_star as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkBanditState {
    plays: Vec<u64>,
    reward_sum: Vec<f64>,
    frame_queue: Vec<u64>,
    q_star: u64,
}

impl LinkBanditState {
    pub fn new(n_links: usize) -> Self {
        Self {
            plays: vec![0; n_links],
            reward_sum: vec![0.0; n_links],
            frame_queue: vec![0; n_links],
            q_star: 0,
        }
    }

    pub fn n_links(&self) -> usize {
        self.plays.len()
    }

    /// Clears all statistics and freezes `queues` as the frame-start snapshot.
    pub fn reset_frame(&mut self, queues: &[u64]) -> Result<(), BanditError> {
        if queues.len() != self.n_links() {
            return Err(BanditError::QueueLength {
                expected: self.n_links(),
                got: queues.len(),
            });
        }
        self.plays.fill(0);
        self.reward_sum.fill(0.0);
        self.frame_queue.copy_from_slice(queues);
        self.q_star = queues.iter().copied().max().unwrap_or(0);
        Ok(())
    }

    pub fn record_play(&mut self, link: LinkId, x: f64) -> Result<(), BanditError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(BanditError::RewardOutOfRange(x));
        }
        self.plays[link] += 1;
        self.reward_sum[link] += x;
        Ok(())
    }

    pub fn plays(&self, link: LinkId) -> u64 {
        self.plays[link]
    }

    pub fn frame_queues(&self) -> &[u64] {
        &self.frame_queue
    }

    pub fn q_star(&self) -> u64 {
        self.q_star
    }

    pub fn ratio(&self, link: LinkId) -> f64 {
        queue_ratio(self.frame_queue[link], self.q_star)
    }

    /// Empirical mean reward without queue weighting.
    pub fn raw_mean(&self, link: LinkId) -> Result<f64, BanditError> {
        match self.plays[link] {
            0 => Err(BanditError::Unplayed(link)),
            n => Ok(self.reward_sum[link] / n as f64),
        }
    }

    /// Queue-weighted empirical mean `(q_i / q*) · ΣX / τ̂`.
    pub fn weighted_mean(&self, link: LinkId) -> Result<f64, BanditError> {
        Ok(self.ratio(link) * self.raw_mean(link)?)
    }

    pub fn radius(&self, link: LinkId, t: u64) -> Result<f64, BanditError> {
        match self.plays[link] {
            0 => Err(BanditError::Unplayed(link)),
            n => Ok(confidence_radius(self.n_links(), t, n as f64)),
        }
    }

    /// Index of `link` at in-frame slot `t`.
    pub fn ucb_index(&self, link: LinkId, t: u64) -> Result<f64, BanditError> {
        Ok(self.weighted_mean(link)? + self.radius(link, t)?)
    }

    pub fn index_vector(&self, t: u64) -> Result<Vec<f64>, BanditError> {
        (0..self.n_links()).map(|l| self.ucb_index(l, t)).collect()
    }

    /// Frame-start queues, raw means, and radii, the quantities visible to
    /// nodes in the distributed protocol.
    pub fn local_view(&self, t: u64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>), BanditError> {
        let queue = self.frame_queue.iter().map(|&q| q as f64).collect();
        let mean = (0..self.n_links()).map(|l| self.raw_mean(l)).collect::<Result<_, _>>()?;
        let radius = (0..self.n_links()).map(|l| self.radius(l, t)).collect::<Result<_, _>>()?;
        Ok((queue, mean, radius))
    }
}

/// Position inside the frame structure. Slots are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameContext {
    pub frame_len: u64,
    /// Frame index, starting at 1.
    pub frame: u64,
    /// Slot within the frame, in `1..=frame_len`.
    pub t: u64,
    pub n_links: usize,
}

impl FrameContext {
    /// Context of global slot `global` (1-based).
    pub fn at(global: u64, frame_len: u64, n_links: usize) -> Self {
        assert!(global >= 1 && frame_len >= 1);
        Self {
            frame_len,
            frame: (global - 1) / frame_len + 1,
            t: (global - 1) % frame_len + 1,
            n_links,
        }
    }

    /// First global slot of this frame.
    pub fn frame_start(&self) -> u64 {
        (self.frame - 1) * self.frame_len + 1
    }

    pub fn in_warmup(&self) -> bool {
        self.t <= self.n_links as u64
    }
}

/// For each link, in id order, a matching that contains it: the link itself
/// completed greedily by ascending link id.
pub fn warmup_schedules(g: &NetworkGraph) -> Vec<Matching> {
    (0..g.link_count())
        .map(|first| {
            let mut m = Matching::empty(g);
            m.insert(g, first).expect("empty matching accepts any link");
            for l in 0..g.link_count() {
                if m.can_insert(g, l) {
                    m.insert(g, l).expect("checked");
                }
            }
            m
        })
        .collect()
}

/// True mean weights `(q_i / q*) · μ_i` with the `q* = 0` convention.
pub fn true_weight_vector(queues: &[u64], mu: &[f64]) -> Vec<f64> {
    let q_star = queues.iter().copied().max().unwrap_or(0);
    queues
        .iter()
        .zip(mu)
        .map(|(&q, &m)| queue_ratio(q, q_star) * m)
        .collect()
}
