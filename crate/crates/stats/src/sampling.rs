//! Sample sizing and stratified proportional sampling for manual validation.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::{Result, StatsError};

/// Sample size for estimating a proportion at the given confidence and margin,
/// with the finite-population correction `n0 / (1 + (n0 - 1) / N)`.
///
/// Uses the worst-case proportion 0.5, so `n0 = z^2 * 0.25 / margin^2`.
pub fn sample_size(population: u64, confidence: f64, margin: f64) -> Result<u64> {
    if population == 0 {
        return Err(StatsError::InvalidArgument("population must be at least 1".into()));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(StatsError::InvalidArgument(format!("confidence {confidence} not in (0, 1)")));
    }
    if !(margin > 0.0 && margin < 1.0) {
        return Err(StatsError::InvalidArgument(format!("margin {margin} not in (0, 1)")));
    }
    let standard = Normal::standard();
    let z = standard.inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n0 = z * z * 0.25 / (margin * margin);
    let corrected = n0 / (1.0 + (n0 - 1.0) / population as f64);
    Ok((corrected.ceil() as u64).min(population))
}

/// Allocates `n` draws across strata proportionally to their sizes using
/// largest-remainder rounding. Ties in the remainder go to the stratum that
/// sorts first.
pub fn allocate_proportional(counts: &BTreeMap<String, usize>, n: usize) -> Result<BTreeMap<String, usize>> {
    let total: usize = counts.values().sum();
    if n > total {
        return Err(StatsError::InvalidArgument(format!("requested {n} samples from a population of {total}")));
    }
    if n == 0 {
        return Ok(counts.keys().map(|k| (k.clone(), 0)).collect());
    }

    let mut allocation = BTreeMap::new();
    let mut remainders = Vec::with_capacity(counts.len());
    let mut assigned = 0usize;
    for (position, (key, &size)) in counts.iter().enumerate() {
        let scaled = n as u128 * size as u128;
        let quota = (scaled / total as u128) as usize;
        let remainder = scaled % total as u128;
        allocation.insert(key.clone(), quota);
        assigned += quota;
        remainders.push((remainder, position, key));
    }
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, _, key) in remainders.into_iter().take(n - assigned) {
        *allocation.get_mut(key.as_str()).expect("allocated key") += 1;
    }
    Ok(allocation)
}

/// Draws a stratified proportional sample. Returns, for each stratum, the
/// sorted indices (into `0..N_i`) selected without replacement.
///
/// A single ChaCha stream seeded from `seed` is consumed in stratum order, so
/// the result is a pure function of `(counts, n, seed)`.
pub fn stratified_sample(
    counts: &BTreeMap<String, usize>,
    n: usize,
    seed: u64,
) -> Result<BTreeMap<String, Vec<usize>>> {
    let allocation = allocate_proportional(counts, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BTreeMap::new();
    for (key, &size) in counts {
        let take = allocation[key];
        let mut picked = rand::seq::index::sample(&mut rng, size, take).into_vec();
        picked.sort_unstable();
        out.insert(key.clone(), picked);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn reported_sample_sizes() {
        let got: Vec<u64> =
            [737, 2348, 3093, 3540, 5260].iter().map(|&n| sample_size(n, 0.95, 0.10).unwrap()).collect();
        assert_eq!(got, vec![86, 93, 94, 94, 95]);
    }

    #[test]
    fn sample_size_edges() {
        assert_eq!(sample_size(1, 0.95, 0.10).unwrap(), 1);
        assert_eq!(sample_size(u64::MAX / 2, 0.95, 0.10).unwrap(), 97);
        assert!(sample_size(0, 0.95, 0.10).is_err());
    }

    #[test]
    fn allocation_examples() {
        let a = allocate_proportional(&counts(&[("A", 50), ("B", 50)]), 10).unwrap();
        assert_eq!(a, counts(&[("A", 5), ("B", 5)]));
        let a = allocate_proportional(&counts(&[("A", 90), ("B", 10)]), 10).unwrap();
        assert_eq!(a, counts(&[("A", 9), ("B", 1)]));
        // 10 * (1/3) each: remainders tie, first keys win
        let a = allocate_proportional(&counts(&[("A", 1), ("B", 1), ("C", 1)]), 2).unwrap();
        assert_eq!(a, counts(&[("A", 1), ("B", 1), ("C", 0)]));
        assert!(allocate_proportional(&counts(&[("A", 3)]), 4).is_err());
    }

    #[test]
    fn exhaustive_stratum_and_determinism() {
        let s = stratified_sample(&counts(&[("A", 7)]), 7, 1).unwrap();
        assert_eq!(s["A"], (0..7).collect::<Vec<_>>());
        let c = counts(&[("A", 40), ("B", 25), ("C", 3)]);
        let first = stratified_sample(&c, 20, 99).unwrap();
        assert_eq!(first, stratified_sample(&c, 20, 99).unwrap());
        assert_eq!(first.values().map(Vec::len).sum::<usize>(), 20);
        assert!(first.iter().all(|(k, v)| v.iter().all(|&i| i < c[k])));
    }
}
