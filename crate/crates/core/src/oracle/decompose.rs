use crate::augment::Augmentation;
use crate::net::{LinkId, Matching, NetworkGraph, NodeId};

use super::OracleError;

/// Splits `s_prev Δ s_target` into disjoint augmentations of size at most
/// `k` whose combined gain is at least `(k-1)/(k+1) · r(s_target) - r(s_prev)`.
///
/// Path components with more than `k` target links are oriented from the
/// endpoint with the lower node id and cut by the best of the `k + 1`
/// removal phases. Cycle components with more than `k` target links first
/// lose their lightest target link and are then handled as paths.
pub fn optimal_augmentation_set(
    g: &NetworkGraph,
    s_prev: &Matching,
    s_target: &Matching,
    k: usize,
    w: &[f64],
) -> Result<Vec<Augmentation>, OracleError> {
    if k < 2 {
        return Err(OracleError::BadK(k));
    }
    super::check_weights(g, w)?;
    if !s_prev.fits(g) || !s_target.fits(g) {
        return Err(OracleError::ForeignMatching);
    }

    let in_diff: Vec<bool> = (0..g.link_count())
        .map(|l| s_prev.contains(l) != s_target.contains(l))
        .collect();
    let diff_links = |v: NodeId| -> Vec<LinkId> {
        g.incident(v).iter().copied().filter(|&l| in_diff[l]).collect()
    };
    let mut visited = vec![false; g.link_count()];
    let mut out = Vec::new();

    for v in 0..g.node_count() {
        let at_v = diff_links(v);
        if at_v.len() != 1 || visited[at_v[0]] {
            continue;
        }
        let path = walk(g, &diff_links, &mut visited, v, at_v[0]);
        out.extend(cut_path(g, s_prev, w, k, v, &path));
    }

    for l in 0..g.link_count() {
        if !in_diff[l] || visited[l] {
            continue;
        }
        let (a, b) = g.endpoints(l);
        let start = a.min(b);
        let cycle = walk(g, &diff_links, &mut visited, start, l);
        let size = cycle.iter().filter(|&&x| !s_prev.contains(x)).count();
        if size <= k {
            out.push(Augmentation::from_walk(g, s_prev, w, start, cycle, k));
            continue;
        }
        let lightest = cycle
            .iter()
            .copied()
            .filter(|&x| !s_prev.contains(x))
            .min_by(|&x, &y| w[x].total_cmp(&w[y]).then(x.cmp(&y)))
            .expect("cycle has target links");
        let pos = cycle.iter().position(|&x| x == lightest).unwrap();
        // Rotated walk runs from the far end of the removed link back to its near end.
        let mut near = start;
        for &x in &cycle[..pos] {
            near = g.other_end(x, near);
        }
        let far = g.other_end(lightest, near);
        let mut path: Vec<LinkId> = cycle[pos + 1..].iter().chain(&cycle[..pos]).copied().collect();
        let head = if far < near {
            far
        } else {
            path.reverse();
            near
        };
        out.extend(cut_path(g, s_prev, w, k, head, &path));
    }
    Ok(out)
}

fn walk(
    g: &NetworkGraph,
    diff_links: &dyn Fn(NodeId) -> Vec<LinkId>,
    visited: &mut [bool],
    start: NodeId,
    first: LinkId,
) -> Vec<LinkId> {
    let mut out = vec![first];
    visited[first] = true;
    let mut node = g.other_end(first, start);
    loop {
        let next = diff_links(node).into_iter().find(|&l| !visited[l]);
        match next {
            Some(l) => {
                visited[l] = true;
                out.push(l);
                node = g.other_end(l, node);
            }
            None => return out,
        }
    }
}

/// The `k + 1` candidate cuttings of a path that starts at `start`: phase `i`
/// drops the `i`-th target link and every `(k+1)`-th target link after it.
/// Each phase is returned as its list of link runs, with the start node of
/// each run.
pub fn phase_family(
    g: &NetworkGraph,
    s_prev: &Matching,
    k: usize,
    start: NodeId,
    path: &[LinkId],
) -> Vec<Vec<(NodeId, Vec<LinkId>)>> {
    let mut phases = Vec::with_capacity(k + 1);
    for phase in 0..=k {
        let mut pieces = Vec::new();
        let mut run = Vec::new();
        let mut run_start = start;
        let mut node = start;
        let mut target_idx = 0usize;
        for &l in path {
            let next = g.other_end(l, node);
            let is_target = !s_prev.contains(l);
            let dropped = is_target && target_idx >= phase && (target_idx - phase) % (k + 1) == 0;
            if is_target {
                target_idx += 1;
            }
            if dropped {
                if !run.is_empty() {
                    pieces.push((run_start, std::mem::take(&mut run)));
                }
                run_start = next;
            } else {
                run.push(l);
            }
            node = next;
        }
        if !run.is_empty() {
            pieces.push((run_start, run));
        }
        phases.push(pieces);
    }
    phases
}

fn cut_path(
    g: &NetworkGraph,
    s_prev: &Matching,
    w: &[f64],
    k: usize,
    start: NodeId,
    path: &[LinkId],
) -> Vec<Augmentation> {
    let size = path.iter().filter(|&&l| !s_prev.contains(l)).count();
    if size <= k {
        return vec![Augmentation::from_walk(g, s_prev, w, start, path.to_vec(), k)];
    }
    let mut best: Option<(f64, Vec<Augmentation>)> = None;
    for pieces in phase_family(g, s_prev, k, start, path) {
        let augs: Vec<Augmentation> = pieces
            .into_iter()
            .map(|(s, links)| Augmentation::from_walk(g, s_prev, w, s, links, k))
            .collect();
        let gain: f64 = augs.iter().map(|a| a.gain).sum();
        if best.as_ref().is_none_or(|(b, _)| gain > *b) {
            best = Some((gain, augs));
        }
    }
    best.map(|(_, a)| a).unwrap_or_default()
}
