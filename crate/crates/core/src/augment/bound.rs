use super::AugmentError;

/// Lower bound on the probability that one round reaches the α-near-optimal
/// set: `min{1, (p/(1-p))^n} · ((1-p)/(kΣ))^n` for `n` nodes and maximum degree `Σ`.
pub fn delta_lower_bound(n_nodes: usize, max_degree: usize, p: f64, k: usize) -> Result<f64, AugmentError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(AugmentError::BadParameter("p must lie in (0, 1)"));
    }
    if k < 1 {
        return Err(AugmentError::BadParameter("k must be at least 1"));
    }
    if max_degree < 1 {
        return Err(AugmentError::BadParameter("maximum degree must be at least 1"));
    }
    let n = i32::try_from(n_nodes).map_err(|_| AugmentError::BadParameter("too many nodes"))?;
    let odds = (p / (1.0 - p)).powi(n).min(1.0);
    Ok(odds * ((1.0 - p) / (k as f64 * max_degree as f64)).powi(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let d = delta_lower_bound(4, 2, 0.2, 2).unwrap();
        assert!((d - 6.25e-6).abs() < 6.25e-6 * 1e-12, "{d}");
        // At p = 1/2 the odds factor is 1 and the bound is ((1/2)/(kΣ))^n.
        let half = delta_lower_bound(5, 3, 0.5, 2).unwrap();
        assert!((half - (1.0f64 / 12.0).powi(5)).abs() < 1e-18);
        let mut last = f64::INFINITY;
        for k in 1..20 {
            let d = delta_lower_bound(6, 3, 0.3, k).unwrap();
            assert!(d < last);
            last = d;
        }
        assert!(delta_lower_bound(4, 2, 1.0, 2).is_err());
        assert!(delta_lower_bound(4, 2, 0.0, 2).is_err());
        assert!(delta_lower_bound(4, 0, 0.5, 2).is_err());
    }
}
