//! Java code-smell detection, dependency extraction and smell-interaction analysis.

pub mod config;
pub mod deps;
pub mod error;
pub mod facts;
pub mod interaction;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod smells;
pub mod study;

pub use error::{Error, Result};
