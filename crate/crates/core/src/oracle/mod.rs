//! Exact and greedy matching solvers, exhaustive enumeration for small
//! graphs, and the constructive decomposition of a schedule change into
//! small augmentations.

mod decompose;
mod enumerate;
mod exact;

pub use decompose::{optimal_augmentation_set, phase_family};
pub use enumerate::{enumerate_matchings, in_near_optimal_set, near_optimal_set, NearOptimal};
pub use exact::{greedy_matching, max_weight_matching, BRANCH_AND_BOUND_LIMIT};

use std::ops::Deref;

use thiserror::Error;

use crate::net::{Matching, NetworkGraph};

/// Largest link count `enumerate_matchings` accepts.
pub const ENUMERATION_LIMIT: usize = 24;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("weight vector has {got} entries, graph has {expected} links")]
    LengthMismatch { expected: usize, got: usize },
    #[error("weight {value} on link {link} is not a finite nonnegative number")]
    BadWeight { link: usize, value: f64 },
    #[error("graph has {0} links, enumeration is limited to {ENUMERATION_LIMIT}")]
    TooLarge(usize),
    #[error("augmentation size bound k must be at least 2, got {0}")]
    BadK(usize),
    #[error("alpha must lie in (0, 1], got {0}")]
    BadAlpha(f64),
    #[error("matching does not belong to this graph")]
    ForeignMatching,
}

/// Per-link nonnegative finite weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(g: &NetworkGraph, w: Vec<f64>) -> Result<Self, OracleError> {
        check_weights(g, &w)?;
        Ok(Self(w))
    }

    pub fn zeros(g: &NetworkGraph) -> Self {
        Self(vec![0.0; g.link_count()])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn check_weights(g: &NetworkGraph, w: &[f64]) -> Result<(), OracleError> {
    if w.len() != g.link_count() {
        return Err(OracleError::LengthMismatch {
            expected: g.link_count(),
            got: w.len(),
        });
    }
    match w.iter().position(|x| !x.is_finite() || *x < 0.0) {
        Some(link) => Err(OracleError::BadWeight { link, value: w[link] }),
        None => Ok(()),
    }
}

/// Sum of member weights, accumulated in ascending link id order.
pub fn weight_sum(m: &Matching, w: &[f64]) -> f64 {
    m.weight(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{grid_topology, ring_topology};

    #[test]
    fn weight_sum_examples() {
        let g = ring_topology(6).unwrap();
        let w = [3.0, 2.0, 1.0, 3.0, 2.0, 1.0];
        assert_eq!(weight_sum(&Matching::empty(&g), &w), 0.0);
        assert_eq!(weight_sum(&Matching::from_links(&g, [0, 2, 4]).unwrap(), &w), 6.0);
        let g = grid_topology(1, 4);
        let w = [1.0, 5.0, 2.0];
        assert_eq!(weight_sum(&Matching::from_links(&g, [0, 2]).unwrap(), &w), 3.0);
    }

    #[test]
    fn weight_vector_validation() {
        let g = grid_topology(1, 3);
        assert!(WeightVector::new(&g, vec![0.0, 1.0]).is_ok());
        assert_eq!(
            WeightVector::new(&g, vec![0.0]),
            Err(OracleError::LengthMismatch { expected: 2, got: 1 })
        );
        assert!(matches!(
            WeightVector::new(&g, vec![0.0, -1.0]),
            Err(OracleError::BadWeight { link: 1, .. })
        ));
        assert!(WeightVector::new(&g, vec![f64::NAN, 1.0]).is_err());
        assert_eq!(&*WeightVector::zeros(&g), &[0.0, 0.0]);
    }
}
