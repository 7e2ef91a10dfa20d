use std::collections::HashSet;

use thiserror::Error;

use crate::net::{LinkId, Matching, NetworkGraph, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AugmentError {
    #[error("augmentation has no links")]
    Empty,
    #[error("link {0} repeated in augmentation")]
    RepeatedLink(LinkId),
    #[error("link {0} does not continue the walk")]
    Broken(LinkId),
    #[error("node {0} visited twice")]
    RepeatedNode(NodeId),
    #[error("links {0} and {1} do not alternate against the previous schedule")]
    NotAlternating(LinkId, LinkId),
    #[error("size {size} exceeds cap {cap} or cap exceeds k = {k}")]
    Oversized { size: usize, cap: usize, k: usize },
    #[error("{links} links exceed 2*{cap}+1")]
    TooLong { links: usize, cap: usize },
    #[error("size field {stored} disagrees with {actual} new links")]
    SizeMismatch { stored: usize, actual: usize },
    #[error("cycle flag disagrees with the walk")]
    CycleMismatch,
    #[error("applying the augmentation does not give a matching")]
    Infeasible,
    #[error("invalid parameter: {0}")]
    BadParameter(&'static str),
}

/// Gain components carried by the distributed protocol.
///
/// `mean` is expressed relative to `normalizer`; `radius` is unscaled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitGain {
    pub mean: f64,
    pub radius: f64,
    pub normalizer: f64,
}

impl SplitGain {
    pub fn total(&self) -> f64 {
        self.mean + self.radius
    }
}

/// An alternating path or cycle relative to the previous schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Augmentation {
    /// Links in walk order starting at `seed`.
    pub links: Vec<LinkId>,
    pub seed: NodeId,
    /// Node that closed the walk and decided on it. This is the last node of
    /// the walk unless the final link was offered to a node that did not answer.
    pub terminus: NodeId,
    /// Number of links outside the previous schedule.
    pub size: usize,
    pub size_cap: usize,
    pub cycle: bool,
    pub gain: f64,
    pub split_gain: Option<SplitGain>,
}

impl Augmentation {
    /// Builds a path or cycle from an ordered link walk starting at `seed`,
    /// filling in size and gain against `s_prev` and `w`.
    pub fn from_walk(
        g: &NetworkGraph,
        s_prev: &Matching,
        w: &[f64],
        seed: NodeId,
        links: Vec<LinkId>,
        size_cap: usize,
    ) -> Self {
        let mut node = seed;
        for &l in &links {
            let (a, b) = g.endpoints(l);
            if a == node {
                node = b;
            } else if b == node {
                node = a;
            } else {
                break;
            }
        }
        let size = links.iter().filter(|&&l| !s_prev.contains(l)).count();
        let cycle = links.len() > 1 && node == seed;
        let gain = augmentation_gain(&links, s_prev, w);
        Self {
            links,
            seed,
            terminus: node,
            size,
            size_cap,
            cycle,
            gain,
            split_gain: None,
        }
    }

    /// Node sequence of the walk, `seed` first. A cycle repeats the seed at the end.
    pub fn nodes(&self, g: &NetworkGraph) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.links.len() + 1);
        let mut node = self.seed;
        out.push(node);
        for &l in &self.links {
            node = g.other_end(l, node);
            out.push(node);
        }
        out
    }

    pub fn new_links<'a>(&'a self, s_prev: &'a Matching) -> impl Iterator<Item = LinkId> + 'a {
        self.links.iter().copied().filter(|&l| !s_prev.contains(l))
    }

    pub fn old_links<'a>(&'a self, s_prev: &'a Matching) -> impl Iterator<Item = LinkId> + 'a {
        self.links.iter().copied().filter(|&l| s_prev.contains(l))
    }

    /// Checks walk structure, alternation, size bounds, and that
    /// `s_prev ⊕ self` is a matching.
    pub fn validate(&self, g: &NetworkGraph, s_prev: &Matching, k: usize) -> Result<(), AugmentError> {
        if self.links.is_empty() {
            return Err(AugmentError::Empty);
        }
        let mut seen_links = HashSet::new();
        let mut seen_nodes = HashSet::from([self.seed]);
        let mut node = self.seed;
        for (i, &l) in self.links.iter().enumerate() {
            if l >= g.link_count() {
                return Err(AugmentError::Broken(l));
            }
            if !seen_links.insert(l) {
                return Err(AugmentError::RepeatedLink(l));
            }
            let (a, b) = g.endpoints(l);
            if a != node && b != node {
                return Err(AugmentError::Broken(l));
            }
            node = g.other_end(l, node);
            let closing = self.cycle && i + 1 == self.links.len() && node == self.seed;
            if !closing && !seen_nodes.insert(node) {
                return Err(AugmentError::RepeatedNode(node));
            }
        }
        if self.cycle != (node == self.seed) {
            return Err(AugmentError::CycleMismatch);
        }
        let pairs = self.links.windows(2).map(|p| (p[0], p[1]));
        let wrap = self
            .cycle
            .then(|| (*self.links.last().unwrap(), self.links[0]));
        for (a, b) in pairs.chain(wrap) {
            if s_prev.contains(a) == s_prev.contains(b) {
                return Err(AugmentError::NotAlternating(a, b));
            }
        }
        let actual = self.new_links(s_prev).count();
        if actual != self.size {
            return Err(AugmentError::SizeMismatch {
                stored: self.size,
                actual,
            });
        }
        if self.size > self.size_cap || self.size_cap > k {
            return Err(AugmentError::Oversized {
                size: self.size,
                cap: self.size_cap,
                k,
            });
        }
        if self.links.len() > 2 * self.size_cap + 1 {
            return Err(AugmentError::TooLong {
                links: self.links.len(),
                cap: self.size_cap,
            });
        }
        apply_augmentations(g, s_prev, std::slice::from_ref(self)).map_err(|_| AugmentError::Infeasible)?;
        Ok(())
    }
}

/// Weight of the links a set of links would add minus the weight of the
/// links it would drop, summed in the given order.
pub fn augmentation_gain(links: &[LinkId], s_prev: &Matching, w: &[f64]) -> f64 {
    links
        .iter()
        .map(|&l| if s_prev.contains(l) { -w[l] } else { w[l] })
        .sum()
}

/// `(s_prev - removed) ∪ added` over all augmentations in `augs`.
pub fn apply_augmentations(
    g: &NetworkGraph,
    s_prev: &Matching,
    augs: &[Augmentation],
) -> Result<Matching, crate::net::NetError> {
    let mut m = s_prev.clone();
    for a in augs {
        for l in a.old_links(s_prev) {
            m.remove(g, l);
        }
    }
    for a in augs {
        for l in a.new_links(s_prev) {
            m.insert(g, l)?;
        }
    }
    Ok(m)
}
