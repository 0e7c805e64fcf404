//! Two-sided Mann-Whitney U test.
//!
//! Ties receive midranks. Small samples use the exact permutation
//! distribution of the rank sum (conditional on the observed tie pattern),
//! larger samples the normal approximation with tie-corrected variance and a
//! 0.5 continuity correction.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::{check_samples, Result};

/// Largest combined sample size (`n1 + n2`) tested with the exact distribution.
pub const DEFAULT_EXACT_CUTOFF: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PValueMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MannWhitney {
    /// U of the first sample: pairs where `x > y`, ties counted one half.
    pub u: f64,
    /// Two-sided p-value.
    pub p: f64,
    pub method: PValueMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MannWhitneyOptions {
    /// Largest `n1 + n2` that uses the exact distribution.
    pub exact_cutoff: usize,
    /// Apply the 0.5 continuity correction on the normal path.
    pub continuity_correction: bool,
}

impl Default for MannWhitneyOptions {
    fn default() -> Self {
        MannWhitneyOptions { exact_cutoff: DEFAULT_EXACT_CUTOFF, continuity_correction: true }
    }
}

/// Runs the test, choosing the exact path when `x.len() + y.len() <= exact_cutoff`.
pub fn mann_whitney_u(x: &[f64], y: &[f64], exact_cutoff: usize) -> Result<MannWhitney> {
    mann_whitney_u_with(x, y, MannWhitneyOptions { exact_cutoff, continuity_correction: true })
}

pub fn mann_whitney_u_with(x: &[f64], y: &[f64], options: MannWhitneyOptions) -> Result<MannWhitney> {
    let exact_cutoff = options.exact_cutoff;
    check_samples(x, y)?;
    let ranks = doubled_midranks(x, y);
    let n1 = x.len() as i64;
    let rank_sum: i64 = ranks[..x.len()].iter().sum();
    let u = (rank_sum - n1 * (n1 + 1)) as f64 / 2.0;

    if x.len() + y.len() <= exact_cutoff {
        Ok(MannWhitney { u, p: exact_p(&ranks, x.len(), rank_sum), method: PValueMethod::Exact })
    } else {
        Ok(MannWhitney { u, p: normal_p(x, y, u, options.continuity_correction), method: PValueMethod::Normal })
    }
}

/// Midranks of the pooled sample `x ++ y`, multiplied by two so they stay integral.
fn doubled_midranks(x: &[f64], y: &[f64]) -> Vec<i64> {
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));

    let mut ranks = vec![0i64; pooled.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end; twice their mean is start+1+end
        let doubled = (start + 1 + end) as i64;
        for &i in &order[start..end] {
            ranks[i] = doubled;
        }
        start = end;
    }
    ranks
}

/// Exact two-sided p: probability, over all size-`n1` subsets of the pooled
/// ranks, of a rank sum at least as far from its mean as the observed one.
fn exact_p(ranks: &[i64], n1: usize, observed: i64) -> f64 {
    let n = ranks.len() as i64;
    let total: i64 = ranks.iter().sum();
    let max_sum = total as usize;

    // ways[k][s]: number of k-subsets with doubled rank sum s
    let mut ways = vec![vec![0f64; max_sum + 1]; n1 + 1];
    ways[0][0] = 1.0;
    for &r in ranks {
        let r = r as usize;
        for k in (1..=n1).rev() {
            let (lower, upper) = ways.split_at_mut(k);
            let prev = &lower[k - 1];
            let cur = &mut upper[0];
            for s in (r..=max_sum).rev() {
                cur[s] += prev[s - r];
            }
        }
    }

    // compare |n*S - n1*T| in integers to avoid rounding at the boundary
    let n1i = n1 as i64;
    let deviation = |s: i64| (n * s - n1i * total).abs();
    let observed_dev = deviation(observed);
    let (mut extreme, mut all) = (0f64, 0f64);
    for (s, &count) in ways[n1].iter().enumerate() {
        if count == 0.0 {
            continue;
        }
        all += count;
        if deviation(s as i64) >= observed_dev {
            extreme += count;
        }
    }
    (extreme / all).min(1.0)
}

fn normal_p(x: &[f64], y: &[f64], u: f64, correction: bool) -> f64 {
    let n1 = x.len() as f64;
    let n2 = y.len() as f64;
    let n = n1 + n2;

    let mut pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j] == pooled[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }

    let variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance.is_nan() || variance <= 0.0 {
        return 1.0;
    }
    let mean = n1 * n2 / 2.0;
    let shift = if correction { 0.5 } else { 0.0 };
    let z = ((u - mean).abs() - shift).max(0.0) / variance.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}
