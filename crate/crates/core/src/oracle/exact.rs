use crate::net::{LinkId, Matching, NetworkGraph};

/// Graphs with at most this many positive-weight links are solved by
/// branch and bound; larger ones go to the blossom solver when enabled.
pub const BRANCH_AND_BOUND_LIMIT: usize = 30;

/// Links ordered by descending weight, lowest id first among equals.
fn by_weight_desc(g: &NetworkGraph, w: &[f64], positive_only: bool) -> Vec<LinkId> {
    let mut order: Vec<LinkId> = (0..g.link_count())
        .filter(|&l| !positive_only || w[l] > 0.0)
        .collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    order
}

/// Repeatedly takes the heaviest link compatible with the partial matching.
/// Ties go to the lowest link id.
pub fn greedy_matching(g: &NetworkGraph, w: &[f64]) -> Matching {
    let mut m = Matching::empty(g);
    for l in by_weight_desc(g, w, false) {
        if m.can_insert(g, l) {
            m.insert(g, l).expect("checked");
        }
    }
    m
}

/// An exact maximum-weight matching and its weight.
pub fn max_weight_matching(g: &NetworkGraph, w: &[f64]) -> (Matching, f64) {
    debug_assert_eq!(w.len(), g.link_count());
    let cand = by_weight_desc(g, w, true);
    #[cfg(feature = "blossom")]
    if cand.len() > BRANCH_AND_BOUND_LIMIT {
        let m = blossom::solve(g, w);
        let value = m.weight(w);
        return (m, value);
    }
    let m = BranchAndBound::new(g, w, cand).solve();
    let value = m.weight(w);
    (m, value)
}

struct BranchAndBound<'a> {
    g: &'a NetworkGraph,
    w: &'a [f64],
    cand: Vec<LinkId>,
    busy: Vec<bool>,
    node_best: Vec<f64>,
    chosen: Vec<LinkId>,
    value: f64,
    best: Vec<LinkId>,
    best_value: f64,
}

impl<'a> BranchAndBound<'a> {
    fn new(g: &'a NetworkGraph, w: &'a [f64], cand: Vec<LinkId>) -> Self {
        let mut greedy = Matching::empty(g);
        for &l in &cand {
            if greedy.can_insert(g, l) {
                greedy.insert(g, l).expect("checked");
            }
        }
        let best: Vec<LinkId> = cand.iter().copied().filter(|&l| greedy.contains(l)).collect();
        let best_value = best.iter().fold(0.0, |acc, &l| acc + w[l]);
        Self {
            g,
            w,
            cand,
            busy: vec![false; g.node_count()],
            node_best: vec![0.0; g.node_count()],
            chosen: Vec::new(),
            value: 0.0,
            best,
            best_value,
        }
    }

    fn solve(mut self) -> Matching {
        self.search(0);
        Matching::from_links(self.g, self.best.iter().copied()).expect("search keeps links disjoint")
    }

    /// Upper bound on the weight still obtainable from `cand[from..]`.
    fn bound(&mut self, from: usize) -> f64 {
        let mut total = 0.0;
        let mut touched = Vec::new();
        for &l in &self.cand[from..] {
            let (u, v) = self.g.endpoints(l);
            if self.busy[u] || self.busy[v] {
                continue;
            }
            let x = self.w[l];
            total += x;
            for n in [u, v] {
                if self.node_best[n] == 0.0 {
                    self.node_best[n] = x;
                    touched.push(n);
                }
            }
        }
        let half: f64 = touched.iter().map(|&n| self.node_best[n]).sum::<f64>() / 2.0;
        for n in touched {
            self.node_best[n] = 0.0;
        }
        total.min(half)
    }

    fn search(&mut self, i: usize) {
        if self.value > self.best_value {
            self.best_value = self.value;
            self.best.clone_from(&self.chosen);
        }
        if i == self.cand.len() || self.value + self.bound(i) <= self.best_value {
            return;
        }
        let l = self.cand[i];
        let (u, v) = self.g.endpoints(l);
        if !self.busy[u] && !self.busy[v] {
            self.busy[u] = true;
            self.busy[v] = true;
            self.chosen.push(l);
            self.value += self.w[l];
            self.search(i + 1);
            self.value -= self.w[l];
            self.chosen.pop();
            self.busy[u] = false;
            self.busy[v] = false;
        }
        self.search(i + 1);
    }
}

#[cfg(feature = "blossom")]
mod blossom {
    use petgraph::graph::{NodeIndex, UnGraph};
    use rustworkx_core::max_weight_matching::max_weight_matching;

    use crate::net::{Matching, NetworkGraph};

    /// Integer scale applied to weights before the exact integer solver.
    const SCALE: f64 = (1u64 << 40) as f64;

    pub(super) fn solve(g: &NetworkGraph, w: &[f64]) -> Matching {
        let top = w.iter().copied().fold(0.0, f64::max);
        let factor = if top > 0.0 { SCALE / top } else { 1.0 };
        let mut pg = UnGraph::<(), i128>::with_capacity(g.node_count(), g.link_count());
        for _ in 0..g.node_count() {
            pg.add_node(());
        }
        for (l, &(u, v)) in g.links().iter().enumerate() {
            if w[l] > 0.0 {
                pg.add_edge(NodeIndex::new(u), NodeIndex::new(v), (w[l] * factor).round() as i128);
            }
        }
        let pairs = max_weight_matching(&pg, false, |e| Ok::<i128, ()>(*e.weight()), false)
            .expect("weight function is infallible");
        let mut links: Vec<_> = pairs
            .into_iter()
            .map(|(u, v)| g.link_between(u, v).expect("solver returns graph edges"))
            .collect();
        links.sort_unstable();
        Matching::from_links(g, links).expect("solver returns a matching")
    }
}
