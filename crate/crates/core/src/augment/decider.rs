use std::collections::{HashMap, HashSet, VecDeque};

use rand::Rng;
use rand_pcg::Pcg64Mcg;

use crate::net::{LinkId, NodeId};
use crate::rng;

/// Source of every random choice a node makes during one round.
pub trait Decider {
    /// Whether `node` starts an augmentation this round.
    fn seed(&mut self, node: NodeId, p: f64) -> bool;
    /// Size cap drawn by a seed, in `1..=k`.
    fn size_cap(&mut self, node: NodeId, k: usize) -> usize;
    /// Index into `candidates` (link, far node) of the link `node` extends over.
    fn pick(&mut self, node: NodeId, candidates: &[(LinkId, NodeId)]) -> usize;
}

/// One independent stream per node, keyed by `(base, slot, node)`.
pub struct SlotStreams {
    key: u64,
    streams: Vec<Option<Pcg64Mcg>>,
}

impl SlotStreams {
    pub fn new(base: u64, slot: u64, node_count: usize) -> Self {
        Self {
            key: rng::derive_seed(base, &[rng::label::PROTOCOL, slot]),
            streams: (0..node_count).map(|_| None).collect(),
        }
    }

    fn stream(&mut self, node: NodeId) -> &mut Pcg64Mcg {
        let key = self.key;
        self.streams[node].get_or_insert_with(|| rng::stream(key, &[node as u64]))
    }
}

impl Decider for SlotStreams {
    fn seed(&mut self, node: NodeId, p: f64) -> bool {
        self.stream(node).random::<f64>() < p
    }

    fn size_cap(&mut self, node: NodeId, k: usize) -> usize {
        self.stream(node).random_range(1..=k)
    }

    fn pick(&mut self, node: NodeId, candidates: &[(LinkId, NodeId)]) -> usize {
        self.stream(node).random_range(0..candidates.len())
    }
}

/// Fixed choices for hand-traced rounds. Unscripted caps default to `k` and
/// unscripted picks to the first candidate.
#[derive(Debug, Clone, Default)]
pub struct Scripted {
    seeds: HashSet<NodeId>,
    caps: HashMap<NodeId, usize>,
    picks: HashMap<NodeId, VecDeque<NodeId>>,
}

impl Scripted {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_seed(mut self, node: NodeId, cap: usize) -> Self {
        self.seeds.insert(node);
        self.caps.insert(node, cap);
        self
    }

    /// `node` will extend toward `target` the next time it picks.
    pub fn with_pick(mut self, node: NodeId, target: NodeId) -> Self {
        self.picks.entry(node).or_default().push_back(target);
        self
    }
}

impl Decider for Scripted {
    fn seed(&mut self, node: NodeId, _p: f64) -> bool {
        self.seeds.contains(&node)
    }

    fn size_cap(&mut self, node: NodeId, k: usize) -> usize {
        self.caps.get(&node).copied().unwrap_or(k).min(k)
    }

    fn pick(&mut self, node: NodeId, candidates: &[(LinkId, NodeId)]) -> usize {
        let wanted = self.picks.get_mut(&node).and_then(VecDeque::pop_front);
        wanted
            .and_then(|t| candidates.iter().position(|&(_, far)| far == t))
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_do_not_depend_on_call_order() {
        let mut a = SlotStreams::new(3, 10, 4);
        let mut b = SlotStreams::new(3, 10, 4);
        let a0 = a.size_cap(0, 1000);
        let a2 = a.size_cap(2, 1000);
        let b2 = b.size_cap(2, 1000);
        let b0 = b.size_cap(0, 1000);
        assert_eq!((a0, a2), (b0, b2));
        let mut c = SlotStreams::new(3, 11, 4);
        let cs: Vec<_> = (0..4).map(|n| c.size_cap(n, 1 << 20)).collect();
        let mut d = SlotStreams::new(3, 10, 4);
        let ds: Vec<_> = (0..4).map(|n| d.size_cap(n, 1 << 20)).collect();
        assert_ne!(cs, ds);
    }

    #[test]
    fn size_cap_is_uniform_on_one_to_k() {
        let mut counts = [0usize; 4];
        for slot in 0..40_000 {
            let mut s = SlotStreams::new(1, slot, 1);
            counts[s.size_cap(0, 4) - 1] += 1;
        }
        for c in counts {
            assert!((9_500..10_500).contains(&c), "{counts:?}");
        }
    }

    #[test]
    fn scripted_choices() {
        let mut s = Scripted::new().with_seed(2, 1).with_pick(2, 7).with_pick(2, 5);
        assert!(s.seed(2, 0.0));
        assert!(!s.seed(3, 1.0));
        assert_eq!(s.size_cap(2, 3), 1);
        assert_eq!(s.size_cap(4, 3), 3);
        let cands = [(0, 5), (1, 7)];
        assert_eq!(s.pick(2, &cands), 1);
        assert_eq!(s.pick(2, &cands), 0);
        assert_eq!(s.pick(2, &cands), 0);
    }
}
