//! Seeded synthetic-data generation with known ground truth.
//!
//! The generator plants controllable within/between coupling in a latent
//! factor model, emits the same table schemas the loaders read, and exposes
//! closed-form oracles so estimator output can be checked against exact
//! answers instead of other estimates.

mod generate;
mod spec;
mod targets;

pub use generate::{generate, SynthOutput, SYNTH_START_DAY};
pub use spec::{GroundTruth, RegionSpec, RegionTruth, SynthSpec};
pub use targets::{synth_targets, TargetInput, TargetWeights};

use crate::error::{Error, Result};

/// Exact mutual information of a bivariate Gaussian with correlation `rho`:
/// `−½·ln(1−ρ²)` nats.
pub fn gaussian_mi_oracle(rho: f64) -> Result<f64> {
    if !rho.is_finite() || rho.abs() >= 1.0 {
        return Err(Error::Validation(format!(
            "gaussian MI oracle requires |rho| < 1, got {rho}"
        )));
    }
    Ok(-0.5 * (1.0 - rho * rho).ln())
}
