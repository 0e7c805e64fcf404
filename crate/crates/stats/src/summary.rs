//! Per-system aggregation of contrast outcomes.

/// Fraction of included projects whose test rejected the null hypothesis.
pub fn significance_rate(significant: &[bool]) -> Option<f64> {
    if significant.is_empty() {
        return None;
    }
    let hits = significant.iter().filter(|&&s| s).count();
    Some(hits as f64 / significant.len() as f64)
}

/// `(#nonnegative delta - #negative delta) / #projects`, in `[-1, 1]`.
pub fn consistency_score(deltas: &[f64]) -> Option<f64> {
    if deltas.is_empty() {
        return None;
    }
    let negative = deltas.iter().filter(|&&d| d < 0.0).count() as f64;
    let nonnegative = deltas.len() as f64 - negative;
    Some((nonnegative - negative) / deltas.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_and_consistency() {
        let sig = [true, true, false, true, false, true, true, false, true, false];
        assert_eq!(significance_rate(&sig), Some(0.6));
        let deltas = [0.1, 0.2, 0.0, 0.3, 0.5, 0.1, 0.2, 0.4, -0.1, -0.3];
        assert!((consistency_score(&deltas).unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(significance_rate(&[]), None);
        assert_eq!(consistency_score(&[]), None);
    }
}
