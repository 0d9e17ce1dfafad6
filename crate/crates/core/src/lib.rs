//! Batch analytics for cell-level activity time series.
//!
//! The pipeline: ingest per-cell hourly activity counts and a
//! cell-to-municipality-to-region assignment ([`data`]), remove the circadian
//! trend with per-slot z-scores ([`normalize`]), estimate average daily mutual
//! information for every cell pair and aggregate it into per-region *within*
//! and *between* synchronization indices ([`sync`]), screen region-level
//! variables for spatial autocorrelation ([`spatial`]), and explain region
//! outcomes with an OLS variable-importance suite — beta weights, structure
//! coefficients, commonality, dominance, and LMG shares ([`importance`]).
//! [`synth`] generates seeded synthetic datasets with known ground truth for
//! validating the estimators end to end.

pub mod data;
pub mod error;
pub mod importance;
pub mod normalize;
pub mod rng;
pub mod spatial;
pub mod sync;
pub mod synth;

pub use error::{Error, Result};
