use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::net::{LinkId, Matching, NetworkGraph, NodeId};

use super::gain::{GainModel, IndexGain, LinkView, NormalizedGain};
use super::{apply_augmentations, Augmentation, Decider};

/// Parameters of one augmentation round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundConfig {
    /// Probability that a node seeds an augmentation.
    pub p: f64,
    /// Upper bound on augmentation size.
    pub k: usize,
    /// Record one line per request message.
    pub trace: bool,
}

impl RoundConfig {
    pub fn new(p: f64, k: usize) -> Self {
        Self { p, k, trace: false }
    }

    /// Mini-slots one round occupies.
    pub fn mini_slots(&self) -> usize {
        4 * self.k + 2
    }
}

#[derive(Debug, Clone)]
pub struct RoundResult {
    pub schedule: Matching,
    /// Every non-empty augmentation built this round, applied or not.
    pub augmentations: Vec<Augmentation>,
    pub trace: Vec<String>,
}

impl RoundResult {
    /// Augmentations with positive gain, which were applied.
    pub fn applied(&self) -> impl Iterator<Item = &Augmentation> {
        self.augmentations.iter().filter(|a| a.gain > 0.0)
    }
}

/// One round of the randomized augmentation protocol with gains measured in `w`.
pub fn run_augmentation_round<D: Decider>(
    g: &NetworkGraph,
    s_prev: &Matching,
    w: &[f64],
    cfg: &RoundConfig,
    decider: &mut D,
) -> RoundResult {
    let mut model = IndexGain { weights: w };
    Engine::new(g, s_prev, cfg, &mut model, decider).run()
}

/// One round where every node normalizes queue weights by its own local
/// normalizer. `normalizers` is updated in place.
pub fn run_augmentation_round_distributed<D: Decider>(
    g: &NetworkGraph,
    s_prev: &Matching,
    view: LinkView<'_>,
    normalizers: &mut [f64],
    cfg: &RoundConfig,
    decider: &mut D,
) -> RoundResult {
    let mut model = NormalizedGain { view, normalizers };
    Engine::new(g, s_prev, cfg, &mut model, decider).run()
}

/// The link that closes `links` into a cycle, if the walk qualifies: it ends
/// at `terminus`, starts and ends on links of the previous schedule, has room
/// for one more new link, and `terminus` neighbours the seed over a link not
/// yet used.
fn closing_link(
    g: &NetworkGraph,
    s_prev: &Matching,
    links: &[LinkId],
    seed: NodeId,
    terminus: NodeId,
    z: usize,
    z_cap: usize,
) -> Option<LinkId> {
    let (&first, &last) = (links.first()?, links.last()?);
    let mut end = seed;
    for &l in links {
        end = g.other_end(l, end);
    }
    if end != terminus || links.len() < 3 || !s_prev.contains(first) || !s_prev.contains(last) || z >= z_cap {
        return None;
    }
    g.link_between(terminus, seed).filter(|c| !links.contains(c))
}

/// Closes `a` into a cycle when the cycle conditions hold, adding the closing
/// link's weight to its gain. Otherwise returns `a` unchanged.
pub fn check_cycle(g: &NetworkGraph, s_prev: &Matching, w: &[f64], mut a: Augmentation) -> Augmentation {
    if a.cycle {
        return a;
    }
    if let Some(c) = closing_link(g, s_prev, &a.links, a.seed, a.terminus, a.size, a.size_cap) {
        a.links.push(c);
        a.size += 1;
        a.gain += w[c];
        a.cycle = true;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Null,
    Active,
    Wait,
    Used,
    Done,
}

struct Walk<G> {
    seed: NodeId,
    links: Vec<LinkId>,
    members: Vec<NodeId>,
    z: usize,
    z_cap: usize,
    gain: G,
    tail: NodeId,
    /// The tail arrived over a link of the previous schedule and should now
    /// offer a new link.
    arrived_on_prev: bool,
    /// Link the tail was offered and still has to add.
    pending: Option<LinkId>,
    done: bool,
}

struct Req {
    from: NodeId,
    to: NodeId,
    link: LinkId,
    walk: usize,
    on_prev: bool,
}

struct Engine<'a, M: GainModel, D> {
    g: &'a NetworkGraph,
    s_prev: &'a Matching,
    cfg: &'a RoundConfig,
    model: &'a mut M,
    decider: &'a mut D,
    state: Vec<State>,
    walks: Vec<Walk<M::Gain>>,
    outbox: Vec<Req>,
    trace: Vec<String>,
}

impl<'a, M: GainModel, D: Decider> Engine<'a, M, D> {
    fn new(
        g: &'a NetworkGraph,
        s_prev: &'a Matching,
        cfg: &'a RoundConfig,
        model: &'a mut M,
        decider: &'a mut D,
    ) -> Self {
        Self {
            g,
            s_prev,
            cfg,
            model,
            decider,
            state: vec![State::Null; g.node_count()],
            walks: Vec::new(),
            outbox: Vec::new(),
            trace: Vec::new(),
        }
    }

    fn run(mut self) -> RoundResult {
        self.initialize();
        self.deliver(1);
        for tau in 2..=2 * self.cfg.k + 1 {
            for i in 0..self.walks.len() {
                let w = &self.walks[i];
                if !w.done && self.state[w.tail] == State::Active {
                    self.extend(i);
                }
            }
            self.deliver(tau);
        }
        for i in 0..self.walks.len() {
            if !self.walks[i].done {
                self.finish(i);
            }
        }
        let augmentations = self.close_and_decide();
        let applied: Vec<Augmentation> = augmentations.iter().filter(|a| a.gain > 0.0).cloned().collect();
        let schedule =
            apply_augmentations(self.g, self.s_prev, &applied).expect("augmentations are node-disjoint");
        RoundResult {
            schedule,
            augmentations,
            trace: self.trace,
        }
    }

    fn initialize(&mut self) {
        let seeds: Vec<NodeId> = (0..self.g.node_count())
            .filter(|&v| self.decider.seed(v, self.cfg.p))
            .collect();
        for &v in &seeds {
            self.state[v] = State::Active;
        }
        for v in seeds {
            let z_cap = self.decider.size_cap(v, self.cfg.k);
            let idx = self.walks.len();
            self.walks.push(Walk {
                seed: v,
                links: Vec::new(),
                members: vec![v],
                z: 0,
                z_cap,
                gain: self.model.zero(v),
                tail: v,
                arrived_on_prev: false,
                pending: None,
                done: false,
            });
            if let Some(l) = self.s_prev.link_at(v) {
                let walk = &mut self.walks[idx];
                walk.links.push(l);
                self.model.add(&mut walk.gain, l, -1.0, v);
                self.send(idx, l, true);
            } else {
                let candidates: Vec<(LinkId, NodeId)> =
                    self.g.incident(v).iter().map(|&l| (l, self.g.other_end(l, v))).collect();
                if candidates.is_empty() {
                    self.finish(idx);
                } else {
                    let pick = self.decider.pick(v, &candidates);
                    self.send(idx, candidates[pick].0, false);
                }
            }
        }
    }

    fn extend(&mut self, idx: usize) {
        let v = self.walks[idx].tail;
        if self.walks[idx].arrived_on_prev {
            let walk = &self.walks[idx];
            if walk.z >= walk.z_cap {
                self.finish(idx);
                return;
            }
            let candidates: Vec<(LinkId, NodeId)> = self
                .g
                .incident(v)
                .iter()
                .filter(|l| !walk.links.contains(l))
                .map(|&l| (l, self.g.other_end(l, v)))
                .collect();
            if candidates.is_empty() {
                self.finish(idx);
                return;
            }
            let pick = self.decider.pick(v, &candidates);
            self.send(idx, candidates[pick].0, false);
        } else {
            let walk = &mut self.walks[idx];
            let l = walk.pending.take().expect("offered link recorded on acceptance");
            walk.links.push(l);
            walk.z += 1;
            self.model.add(&mut walk.gain, l, 1.0, v);
            match self.s_prev.link_at(v) {
                Some(own) => {
                    walk.links.push(own);
                    self.model.add(&mut walk.gain, own, -1.0, v);
                    self.send(idx, own, true);
                }
                None => self.finish(idx),
            }
        }
    }

    fn send(&mut self, idx: usize, link: LinkId, on_prev: bool) {
        let from = self.walks[idx].tail;
        let to = self.g.other_end(link, from);
        self.state[from] = State::Wait;
        self.outbox.push(Req {
            from,
            to,
            link,
            walk: idx,
            on_prev,
        });
    }

    fn finish(&mut self, idx: usize) {
        let walk = &mut self.walks[idx];
        walk.done = true;
        self.state[walk.tail] = State::Done;
    }

    fn deliver(&mut self, tau: usize) {
        let mut by_receiver: BTreeMap<NodeId, Vec<Req>> = BTreeMap::new();
        for req in self.outbox.drain(..) {
            if self.cfg.trace {
                let walk = &self.walks[req.walk];
                let mut line = String::new();
                write!(
                    line,
                    "tau={tau} REQ {}->{} Z={} G={}",
                    req.from,
                    req.to,
                    walk.z,
                    self.model.total(&walk.gain)
                )
                .unwrap();
                self.trace.push(line);
            }
            by_receiver.entry(req.to).or_default().push(req);
        }
        for (to, reqs) in by_receiver {
            let winner = if self.state[to] != State::Null {
                None
            } else if reqs.len() == 1 {
                Some(0)
            } else {
                let mut on_prev = reqs.iter().enumerate().filter(|(_, r)| r.on_prev);
                match (on_prev.next(), on_prev.next()) {
                    (Some((i, _)), None) => Some(i),
                    _ => None,
                }
            };
            let collided = reqs.len() > 1;
            for (i, req) in reqs.into_iter().enumerate() {
                if Some(i) == winner {
                    let idx = req.walk;
                    self.accept(req);
                    // The winner of a collision keeps the contested node but stops there.
                    if collided {
                        self.finish(idx);
                    }
                } else {
                    self.finish(req.walk);
                }
            }
        }
    }

    fn accept(&mut self, req: Req) {
        self.state[req.from] = State::Used;
        self.state[req.to] = State::Active;
        let walk = &mut self.walks[req.walk];
        walk.gain = self.model.hand_over(walk.gain, req.from, req.to);
        walk.tail = req.to;
        walk.members.push(req.to);
        walk.arrived_on_prev = req.on_prev;
        walk.pending = (!req.on_prev).then_some(req.link);
    }

    /// Cycle check at each terminus, then the augment/keep decision.
    fn close_and_decide(&mut self) -> Vec<Augmentation> {
        let mut out = Vec::new();
        for walk in &mut self.walks {
            if walk.links.is_empty() {
                self.model.settle(&walk.members, walk.tail);
                continue;
            }
            let t = walk.tail;
            let closing = closing_link(self.g, self.s_prev, &walk.links, walk.seed, t, walk.z, walk.z_cap);
            if let Some(c) = closing {
                walk.links.push(c);
                walk.z += 1;
                self.model.add(&mut walk.gain, c, 1.0, t);
            }
            let cycle = closing.is_some();
            self.model.settle(&walk.members, t);
            out.push(Augmentation {
                links: std::mem::take(&mut walk.links),
                seed: walk.seed,
                terminus: t,
                size: walk.z,
                size_cap: walk.z_cap,
                cycle,
                gain: self.model.total(&walk.gain),
                split_gain: self.model.split(&walk.gain),
            });
        }
        out
    }
}
