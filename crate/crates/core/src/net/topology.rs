use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{NetError, NetworkGraph, NodeId};

/// `rows x cols` lattice. Nodes are numbered row-major; for each node the
/// link to its right neighbour is listed before the link to the node below.
pub fn grid_topology(rows: usize, cols: usize) -> NetworkGraph {
    assert!(rows >= 1 && cols >= 1, "grid dimensions must be positive");
    let id = |r: usize, c: usize| r * cols + c;
    let mut links = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                links.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                links.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    NetworkGraph::new(rows * cols, links).expect("lattice links are simple")
}

/// Single cycle on `n` nodes; link `i` joins nodes `i` and `i + 1 (mod n)`,
/// so link `i` touches links `i - 1` and `i + 1`.
pub fn ring_topology(n: usize) -> Result<NetworkGraph, NetError> {
    if n < 3 {
        return Err(NetError::RingTooSmall(n));
    }
    let links = (0..n).map(|i| (i, (i + 1) % n)).collect();
    NetworkGraph::new(n, links)
}

/// Connected simple graph with exactly `n_links` links.
///
/// A uniformly random recursive spanning tree is laid down first, then the
/// remaining links are drawn uniformly from the unused node pairs. Links are
/// sorted by `(min, max)` endpoint before ids are assigned.
pub fn random_topology(n_nodes: usize, n_links: usize, seed: u64) -> Result<NetworkGraph, NetError> {
    let max_links = n_nodes * n_nodes.saturating_sub(1) / 2;
    if n_nodes == 0 || n_links + 1 < n_nodes || n_links > max_links {
        return Err(NetError::InfeasibleLinkCount {
            nodes: n_nodes,
            links: n_links,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut order: Vec<NodeId> = (0..n_nodes).collect();
    order.shuffle(&mut rng);
    let mut present = vec![false; max_links];
    let pair_index = |u: NodeId, v: NodeId| {
        let (a, b) = (u.min(v), u.max(v));
        // row-major index into the strict upper triangle
        a * n_nodes - a * (a + 1) / 2 + (b - a - 1)
    };
    let mut links = Vec::with_capacity(n_links);
    for i in 1..n_nodes {
        let parent = order[rng.random_range(0..i)];
        let child = order[i];
        present[pair_index(parent, child)] = true;
        links.push((parent.min(child), parent.max(child)));
    }

    let mut free = Vec::with_capacity(max_links - links.len());
    for a in 0..n_nodes {
        for b in a + 1..n_nodes {
            if !present[pair_index(a, b)] {
                free.push((a, b));
            }
        }
    }
    let extra = n_links - links.len();
    let mut picked: Vec<usize> = index::sample(&mut rng, free.len(), extra).into_vec();
    picked.sort_unstable();
    links.extend(picked.into_iter().map(|i| free[i]));
    links.sort_unstable();
    NetworkGraph::new(n_nodes, links)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn each_link_in_two_adjacency_sets(g: &NetworkGraph) {
        let mut count = vec![0; g.link_count()];
        for v in 0..g.node_count() {
            for &l in g.incident(v) {
                count[l] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 2));
    }

    #[test]
    fn grid_counts() {
        let g = grid_topology(4, 4);
        assert_eq!((g.node_count(), g.link_count()), (16, 24));
        let g = grid_topology(1, 1);
        assert_eq!((g.node_count(), g.link_count()), (1, 0));
        let g = grid_topology(1, 2);
        assert_eq!((g.node_count(), g.link_count()), (2, 1));
        for (r, c) in [(3, 4), (2, 5), (5, 1)] {
            let g = grid_topology(r, c);
            assert_eq!(g.link_count(), r * (c - 1) + c * (r - 1));
            each_link_in_two_adjacency_sets(&g);
            assert!(g.is_connected());
        }
    }

    #[test]
    fn ring_shape() {
        let g = ring_topology(6).unwrap();
        assert_eq!((g.node_count(), g.link_count()), (6, 6));
        assert!((0..6).all(|v| g.degree(v) == 2));
        for i in 0..6 {
            assert!(g.adjacent(i, (i + 1) % 6));
            assert!(g.adjacent(i, (i + 5) % 6));
        }
        assert!(!g.adjacent(0, 2));
        assert!(matches!(ring_topology(2), Err(NetError::RingTooSmall(2))));
        each_link_in_two_adjacency_sets(&g);
    }

    #[test]
    fn random_topology_connected_and_sized() {
        let g = random_topology(50, 200, 11).unwrap();
        assert_eq!((g.node_count(), g.link_count()), (50, 200));
        assert!(g.is_connected());
        each_link_in_two_adjacency_sets(&g);

        let g = random_topology(2, 1, 3).unwrap();
        assert_eq!(g.links(), &[(0, 1)]);

        let g = random_topology(5, 4, 9).unwrap();
        assert_eq!(g.link_count(), 4);
        assert!(g.is_connected());
    }

    #[test]
    fn random_topology_reproducible() {
        let a = random_topology(30, 80, 5).unwrap();
        let b = random_topology(30, 80, 5).unwrap();
        let c = random_topology(30, 80, 6).unwrap();
        assert_eq!(a.links(), b.links());
        assert_ne!(a.links(), c.links());
    }

    #[test]
    fn random_topology_rejects_bad_counts() {
        assert!(random_topology(5, 3, 0).is_err());
        assert!(random_topology(5, 11, 0).is_err());
        assert!(random_topology(5, 10, 0).is_ok());
    }
}
