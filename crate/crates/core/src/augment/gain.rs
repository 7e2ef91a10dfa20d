use std::fmt;

use crate::net::{LinkId, NodeId};

use super::SplitGain;

/// How a walk accumulates its gain while it is passed from node to node.
pub trait GainModel {
    type Gain: Copy + fmt::Debug;

    /// Empty gain register held by `at`.
    fn zero(&self, at: NodeId) -> Self::Gain;
    /// Adds (`sign = 1.0`) or subtracts (`sign = -1.0`) the term of `link`, computed at `at`.
    fn add(&self, gain: &mut Self::Gain, link: LinkId, sign: f64, at: NodeId);
    /// Called when `to` accepts a request from `from` carrying `gain`.
    fn hand_over(&mut self, gain: Self::Gain, from: NodeId, to: NodeId) -> Self::Gain;
    fn total(&self, gain: &Self::Gain) -> f64;
    fn split(&self, gain: &Self::Gain) -> Option<SplitGain>;
    /// Called once per finished walk with the nodes that joined it.
    fn settle(&mut self, members: &[NodeId], terminus: NodeId);
}

/// Plain weighted gain over a global weight vector.
pub struct IndexGain<'a> {
    pub weights: &'a [f64],
}

impl GainModel for IndexGain<'_> {
    type Gain = f64;

    fn zero(&self, _at: NodeId) -> f64 {
        0.0
    }

    fn add(&self, gain: &mut f64, link: LinkId, sign: f64, _at: NodeId) {
        *gain += sign * self.weights[link];
    }

    fn hand_over(&mut self, gain: f64, _from: NodeId, _to: NodeId) -> f64 {
        gain
    }

    fn total(&self, gain: &f64) -> f64 {
        *gain
    }

    fn split(&self, _gain: &f64) -> Option<SplitGain> {
        None
    }

    fn settle(&mut self, _members: &[NodeId], _terminus: NodeId) {}
}

/// Per-link quantities a node can see locally: frame-start queue, empirical
/// mean reward, and confidence radius.
#[derive(Debug, Clone, Copy)]
pub struct LinkView<'a> {
    pub queue: &'a [f64],
    pub mean: &'a [f64],
    pub radius: &'a [f64],
}

/// Gain built from node-local normalizers instead of the global maximum queue.
pub struct NormalizedGain<'a> {
    pub view: LinkView<'a>,
    pub normalizers: &'a mut [f64],
}

fn ratio(queue: f64, normalizer: f64) -> f64 {
    if normalizer > 0.0 {
        queue / normalizer
    } else {
        1.0
    }
}

impl GainModel for NormalizedGain<'_> {
    type Gain = SplitGain;

    fn zero(&self, at: NodeId) -> SplitGain {
        SplitGain {
            mean: 0.0,
            radius: 0.0,
            normalizer: self.normalizers[at],
        }
    }

    fn add(&self, gain: &mut SplitGain, link: LinkId, sign: f64, at: NodeId) {
        let q = self.normalizers[at];
        gain.mean += sign * ratio(self.view.queue[link], q) * self.view.mean[link];
        gain.radius += sign * self.view.radius[link];
    }

    fn hand_over(&mut self, gain: SplitGain, from: NodeId, to: NodeId) -> SplitGain {
        let q_from = self.normalizers[from];
        let q_to = self.normalizers[to].max(q_from);
        self.normalizers[to] = q_to;
        let scale = if q_to > 0.0 { q_from / q_to } else { 1.0 };
        SplitGain {
            mean: gain.mean * scale,
            radius: gain.radius,
            normalizer: q_to,
        }
    }

    fn total(&self, gain: &SplitGain) -> f64 {
        gain.total()
    }

    fn split(&self, gain: &SplitGain) -> Option<SplitGain> {
        Some(*gain)
    }

    fn settle(&mut self, members: &[NodeId], terminus: NodeId) {
        let q = self.normalizers[terminus];
        for &v in members {
            self.normalizers[v] = q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rescale_on_hand_over() {
        let queue = [0.0];
        let mean = [0.0];
        let radius = [0.0];
        let mut normalizers = [10.0, 20.0];
        let mut model = NormalizedGain {
            view: LinkView {
                queue: &queue,
                mean: &mean,
                radius: &radius,
            },
            normalizers: &mut normalizers,
        };
        let g = SplitGain {
            mean: 0.5,
            radius: 0.3,
            normalizer: 10.0,
        };
        let got = model.hand_over(g, 0, 1);
        assert_eq!(got.mean, 0.25);
        assert_eq!(got.radius, 0.3);
        assert_eq!(got.normalizer, 20.0);
        // The larger normalizer flows forward unchanged.
        let back = model.hand_over(got, 1, 0);
        assert_eq!(back.mean, 0.25);
        assert_eq!(model.normalizers, &[20.0, 20.0]);
    }

    #[test]
    fn link_terms_use_local_normalizer() {
        let queue = [3.0, 0.0];
        let mean = [0.5, 0.9];
        let radius = [0.1, 0.2];
        let mut normalizers = [6.0, 0.0];
        let model = NormalizedGain {
            view: LinkView {
                queue: &queue,
                mean: &mean,
                radius: &radius,
            },
            normalizers: &mut normalizers,
        };
        let mut g = model.zero(0);
        model.add(&mut g, 0, 1.0, 0);
        assert!((g.mean - 0.25).abs() < 1e-15);
        model.add(&mut g, 1, -1.0, 1);
        // A zero normalizer falls back to an unweighted mean.
        assert!((g.mean - (0.25 - 0.9)).abs() < 1e-15);
        assert!((g.radius - (0.1 - 0.2)).abs() < 1e-15);
    }
}
