use crate::net::{LinkId, Matching, NetworkGraph};

use super::{OracleError, ENUMERATION_LIMIT};

/// Every matching of `g`, the empty one first, each exactly once.
pub fn enumerate_matchings(g: &NetworkGraph) -> Result<Vec<Matching>, OracleError> {
    if g.link_count() > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge(g.link_count()));
    }
    let mut out = Vec::new();
    let mut current = Matching::empty(g);
    extend(g, 0, &mut current, &mut out);
    Ok(out)
}

fn extend(g: &NetworkGraph, from: LinkId, current: &mut Matching, out: &mut Vec<Matching>) {
    out.push(current.clone());
    for l in from..g.link_count() {
        if current.can_insert(g, l) {
            current.insert(g, l).expect("checked");
            extend(g, l + 1, current, out);
            current.remove(g, l);
        }
    }
}

/// Whether a schedule worth `value` belongs to the α-near-optimal set for
/// optimum `r_star`, with a relative slack of 1e-12.
pub fn in_near_optimal_set(value: f64, r_star: f64, alpha: f64) -> bool {
    value >= alpha * r_star - 1e-12 * r_star.max(1.0)
}

/// Partition of all matchings by the α-near-optimality test.
#[derive(Debug, Clone)]
pub struct NearOptimal {
    pub r_star: f64,
    pub inside: Vec<Matching>,
    pub outside: Vec<Matching>,
}

pub fn near_optimal_set(g: &NetworkGraph, w: &[f64], alpha: f64) -> Result<NearOptimal, OracleError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(OracleError::BadAlpha(alpha));
    }
    super::check_weights(g, w)?;
    let all = enumerate_matchings(g)?;
    let r_star = all.iter().map(|m| m.weight(w)).fold(0.0, f64::max);
    let (inside, outside) = all
        .into_iter()
        .partition(|m| in_near_optimal_set(m.weight(w), r_star, alpha));
    Ok(NearOptimal {
        r_star,
        inside,
        outside,
    })
}
