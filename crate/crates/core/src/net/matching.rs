use std::fmt;

use super::{LinkId, NetError, NetworkGraph, NodeId};

/// A conflict-free link set with a per-node occupancy index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    member: Vec<bool>,
    occupant: Vec<Option<LinkId>>,
    len: usize,
}

impl Matching {
    pub fn empty(g: &NetworkGraph) -> Self {
        Self {
            member: vec![false; g.link_count()],
            occupant: vec![None; g.node_count()],
            len: 0,
        }
    }

    pub fn from_links<I>(g: &NetworkGraph, links: I) -> Result<Self, NetError>
    where
        I: IntoIterator<Item = LinkId>,
    {
        let mut m = Self::empty(g);
        for l in links {
            m.insert(g, l)?;
        }
        Ok(m)
    }

    /// Adds `link`, failing if it is unknown or touches an occupied node.
    /// Re-inserting a member is a no-op.
    pub fn insert(&mut self, g: &NetworkGraph, link: LinkId) -> Result<(), NetError> {
        g.check_link(link)?;
        if self.member[link] {
            return Ok(());
        }
        let (u, v) = g.endpoints(link);
        for node in [u, v] {
            if let Some(other) = self.occupant[node] {
                return Err(NetError::Conflict(link, other));
            }
        }
        self.member[link] = true;
        self.occupant[u] = Some(link);
        self.occupant[v] = Some(link);
        self.len += 1;
        Ok(())
    }

    /// Whether `link` could be inserted without conflict.
    pub fn can_insert(&self, g: &NetworkGraph, link: LinkId) -> bool {
        let (u, v) = g.endpoints(link);
        !self.member[link] && self.occupant[u].is_none() && self.occupant[v].is_none()
    }

    pub fn remove(&mut self, g: &NetworkGraph, link: LinkId) -> bool {
        if !self.member.get(link).copied().unwrap_or(false) {
            return false;
        }
        let (u, v) = g.endpoints(link);
        self.member[link] = false;
        self.occupant[u] = None;
        self.occupant[v] = None;
        self.len -= 1;
        true
    }

    /// Whether this matching was built for a graph shaped like `g`.
    pub fn fits(&self, g: &NetworkGraph) -> bool {
        self.member.len() == g.link_count() && self.occupant.len() == g.node_count()
    }

    pub fn contains(&self, link: LinkId) -> bool {
        self.member.get(link).copied().unwrap_or(false)
    }

    /// The member link covering `node`, if any.
    pub fn link_at(&self, node: NodeId) -> Option<LinkId> {
        self.occupant[node]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Member link ids in ascending order.
    pub fn links(&self) -> impl Iterator<Item = LinkId> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter_map(|(l, &m)| m.then_some(l))
    }

    pub fn to_vec(&self) -> Vec<LinkId> {
        self.links().collect()
    }

    /// Sum of `weights` over member links, accumulated in link id order.
    pub fn weight(&self, weights: &[f64]) -> f64 {
        self.links().fold(0.0, |acc, l| acc + weights[l])
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.links()).finish()
    }
}

/// True iff no node appears in two of `links`.
pub fn is_matching(g: &NetworkGraph, links: &[LinkId]) -> Result<bool, NetError> {
    let mut used = vec![false; g.node_count()];
    let mut ok = true;
    let mut seen = std::collections::HashSet::with_capacity(links.len());
    for &l in links {
        g.check_link(l)?;
        if !seen.insert(l) {
            continue;
        }
        let (u, v) = g.endpoints(l);
        if used[u] || used[v] {
            ok = false;
        }
        used[u] = true;
        used[v] = true;
    }
    Ok(ok)
}
