//! Network topology and feasibility under the primary interference model.
//!
//! Links are undirected and identified by dense ids `0..link_count`. A node
//! can take part in at most one active link per slot, so every feasible
//! schedule is a graph matching.

mod io;
mod matching;
mod topology;

pub use io::{read_edge_list, write_edge_list};
pub use matching::{is_matching, Matching};
pub use topology::{grid_topology, random_topology, ring_topology};

use thiserror::Error;

pub type NodeId = usize;
pub type LinkId = usize;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate link between {0} and {1}")]
    DuplicateLink(NodeId, NodeId),
    #[error("node {node} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("unknown link id {0}")]
    UnknownLink(LinkId),
    #[error("links {0} and {1} share a node")]
    Conflict(LinkId, LinkId),
    #[error("a ring needs at least 3 nodes, got {0}")]
    RingTooSmall(usize),
    #[error("cannot build a connected simple graph with {nodes} nodes and {links} links")]
    InfeasibleLinkCount { nodes: usize, links: usize },
    #[error("edge list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Undirected simple graph with dense link ids and per-node incidence lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph {
    node_count: usize,
    links: Vec<(NodeId, NodeId)>,
    incident: Vec<Vec<LinkId>>,
}

impl NetworkGraph {
    /// Builds a graph from an ordered link list. Link `i` of the list gets id `i`.
    pub fn new(node_count: usize, links: Vec<(NodeId, NodeId)>) -> Result<Self, NetError> {
        let mut incident = vec![Vec::new(); node_count];
        let mut seen = std::collections::HashSet::with_capacity(links.len());
        for (id, &(u, v)) in links.iter().enumerate() {
            for node in [u, v] {
                if node >= node_count {
                    return Err(NetError::NodeOutOfRange { node, node_count });
                }
            }
            if u == v {
                return Err(NetError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(NetError::DuplicateLink(u, v));
            }
            incident[u].push(id);
            incident[v].push(id);
        }
        Ok(Self {
            node_count,
            links,
            incident,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[(NodeId, NodeId)] {
        &self.links
    }

    /// Endpoints of `link` as stored.
    pub fn endpoints(&self, link: LinkId) -> (NodeId, NodeId) {
        self.links[link]
    }

    /// The endpoint of `link` that is not `node`.
    pub fn other_end(&self, link: LinkId, node: NodeId) -> NodeId {
        let (u, v) = self.links[link];
        debug_assert!(u == node || v == node, "node {node} not on link {link}");
        if u == node {
            v
        } else {
            u
        }
    }

    /// Link ids incident to `node`, in ascending id order.
    pub fn incident(&self, node: NodeId) -> &[LinkId] {
        &self.incident[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.incident[node].len()
    }

    /// Link joining `u` and `v`, if any.
    pub fn link_between(&self, u: NodeId, v: NodeId) -> Option<LinkId> {
        self.incident[u]
            .iter()
            .copied()
            .find(|&l| self.other_end(l, u) == v)
    }

    pub fn check_link(&self, link: LinkId) -> Result<(), NetError> {
        if link < self.links.len() {
            Ok(())
        } else {
            Err(NetError::UnknownLink(link))
        }
    }

    /// Whether two distinct links share an endpoint.
    pub fn adjacent(&self, a: LinkId, b: LinkId) -> bool {
        let (a0, a1) = self.links[a];
        let (b0, b1) = self.links[b];
        a != b && (a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1)
    }

    /// Maximum node degree (Σ in the reachability bound).
    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether every node can reach every other node.
    pub fn is_connected(&self) -> bool {
        if self.node_count <= 1 {
            return true;
        }
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &l in &self.incident[u] {
                let v = self.other_end(l, u);
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.node_count
    }
}

/// Free function form of [`NetworkGraph::max_degree`].
pub fn max_degree(g: &NetworkGraph) -> usize {
    g.max_degree()
}
