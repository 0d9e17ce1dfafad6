//! Estimator configuration for the synchronization pipeline.

use crate::error::{Error, Result};

/// Small-sample bias handling for the plug-in entropy estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasCorrection {
    /// Raw plug-in estimate.
    None,
    /// Miller–Madow: add (m−1)/(2n) per entropy term, m = occupied bins.
    MillerMadow,
}

/// Which MI estimator to run.
///
/// Only the binned plug-in is implemented; `Knn` is reserved so configs can
/// name the alternative without a schema change later.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    BinnedPlugin,
    Knn,
}

/// Seeded cap on the number of pairs evaluated per class in a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCap {
    pub limit: usize,
    pub seed: u64,
}

/// Configuration for daily MI estimation and pair aggregation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiConfig {
    /// Equal-frequency bins per variable (B ≥ 2).
    pub bins: usize,
    pub bias_correction: BiasCorrection,
    pub estimator: Estimator,
    /// Minimum pairwise-complete slots for a day to be usable; `None`
    /// means all S slots (complete days only).
    pub min_valid_slots_per_day: Option<usize>,
    /// Optional uniform subsampling of within/between pairs.
    pub max_pairs_per_class: Option<PairCap>,
}

impl Default for MiConfig {
    fn default() -> Self {
        MiConfig {
            bins: 4,
            bias_correction: BiasCorrection::MillerMadow,
            estimator: Estimator::BinnedPlugin,
            min_valid_slots_per_day: None,
            max_pairs_per_class: None,
        }
    }
}

impl MiConfig {
    /// Check internal consistency against the cube's slots-per-day count.
    pub fn validate(&self, n_slots: usize) -> Result<()> {
        if self.bins < 2 {
            return Err(Error::Validation(format!("bins must be ≥ 2, got {}", self.bins)));
        }
        if self.bins > n_slots {
            return Err(Error::Validation(format!(
                "bins ({}) exceeds slots per day ({n_slots})",
                self.bins
            )));
        }
        if let Some(min) = self.min_valid_slots_per_day {
            if min > n_slots {
                return Err(Error::Validation(format!(
                    "min_valid_slots_per_day ({min}) exceeds slots per day ({n_slots})"
                )));
            }
            if min < self.bins {
                return Err(Error::Validation(format!(
                    "min_valid_slots_per_day ({min}) is below bins ({})",
                    self.bins
                )));
            }
        }
        if let Some(cap) = self.max_pairs_per_class {
            if cap.limit == 0 {
                return Err(Error::Validation("max_pairs_per_class must be ≥ 1".into()));
            }
        }
        if self.estimator == Estimator::Knn {
            return Err(Error::Validation(
                "the k-NN estimator is reserved but not implemented; use the binned plug-in".into(),
            ));
        }
        Ok(())
    }

    /// Effective per-day slot requirement.
    pub fn required_slots(&self, n_slots: usize) -> usize {
        self.min_valid_slots_per_day.unwrap_or(n_slots)
    }
}
