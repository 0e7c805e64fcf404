//! Statistics used by the code-smell interaction study.
//!
//! Everything here is pure and operates on plain slices so the same routines
//! serve the pooled (union) analysis, the per-system analysis and the
//! manual-validation sampler.

mod cliff;
mod describe;
mod mann_whitney;
mod sampling;
mod summary;

pub use cliff::{cliffs_delta, CliffsDelta, EffectBand};
pub use describe::median;
pub use mann_whitney::{
    mann_whitney_u, mann_whitney_u_with, MannWhitney, MannWhitneyOptions, PValueMethod, DEFAULT_EXACT_CUTOFF,
};
pub use sampling::{allocate_proportional, sample_size, stratified_sample};
pub use summary::{consistency_score, significance_rate};

/// Errors raised by the statistical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("insufficient data: {0}")]
    InsufficientData(&'static str),
    #[error("non-finite value in sample")]
    NonFinite,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, StatsError>;

pub(crate) fn check_samples(x: &[f64], y: &[f64]) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(StatsError::InsufficientData("both samples must be non-empty"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    Ok(())
}
