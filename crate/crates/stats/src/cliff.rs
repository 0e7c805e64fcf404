//! Cliff's delta effect size.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{check_samples, Result};

/// Interpretation bands for |delta|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EffectBand {
    Negligible,
    Small,
    Medium,
    Large,
}

impl EffectBand {
    pub const SMALL: f64 = 0.147;
    pub const MEDIUM: f64 = 0.33;
    pub const LARGE: f64 = 0.474;

    pub fn from_delta(delta: f64) -> Self {
        let magnitude = delta.abs();
        if magnitude < Self::SMALL {
            EffectBand::Negligible
        } else if magnitude < Self::MEDIUM {
            EffectBand::Small
        } else if magnitude < Self::LARGE {
            EffectBand::Medium
        } else {
            EffectBand::Large
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EffectBand::Negligible => "negligible",
            EffectBand::Small => "small",
            EffectBand::Medium => "medium",
            EffectBand::Large => "large",
        }
    }
}

impl fmt::Display for EffectBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CliffsDelta {
    pub delta: f64,
    pub band: EffectBand,
}

/// `(#{x_i > y_j} - #{x_i < y_j}) / (n1 * n2)`; positive when `x` tends to be larger.
///
/// Counts dominance by binary search over sorted `y`, so it stays
/// `O((n1 + n2) log n2)` on the large pooled samples.
pub fn cliffs_delta(x: &[f64], y: &[f64]) -> Result<CliffsDelta> {
    check_samples(x, y)?;
    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mut dominance: i64 = 0;
    for &xi in x {
        let below = sorted.partition_point(|&v| v < xi) as i64;
        let not_above = sorted.partition_point(|&v| v <= xi) as i64;
        let above = sorted.len() as i64 - not_above;
        dominance += below - above;
    }
    let delta = dominance as f64 / (x.len() as f64 * y.len() as f64);
    Ok(CliffsDelta { delta, band: EffectBand::from_delta(delta) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bands_from_reported_values() {
        assert_eq!(EffectBand::from_delta(0.45), EffectBand::Medium);
        assert_eq!(EffectBand::from_delta(-0.18), EffectBand::Small);
        assert_eq!(EffectBand::from_delta(-0.05), EffectBand::Negligible);
        assert_eq!(EffectBand::from_delta(0.147), EffectBand::Small);
        assert_eq!(EffectBand::from_delta(0.33), EffectBand::Medium);
        assert_eq!(EffectBand::from_delta(-0.474), EffectBand::Large);
    }

    #[test]
    fn complete_separation() {
        let d = cliffs_delta(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(d.delta, -1.0);
        assert_eq!(d.band, EffectBand::Large);
    }

    #[test]
    fn ties_count_zero() {
        let d = cliffs_delta(&[1.0, 2.0], &[2.0, 2.0]).unwrap();
        // 1 vs 2: two losses; 2 vs 2: two ties
        assert_eq!(d.delta, -0.5);
        assert_eq!(cliffs_delta(&[3.0; 4], &[3.0; 2]).unwrap().delta, 0.0);
    }
}
