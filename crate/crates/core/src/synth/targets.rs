//! Synthetic region-level targets with known linear structure.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::keyed_rng;

/// One region's predictor skeleton: the sync indices and covariate the
/// target is built from.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetInput {
    pub region_id: String,
    pub within: f64,
    pub between: f64,
    pub covariate: f64,
}

/// Linear weights of the constructed target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetWeights {
    pub within: f64,
    pub between: f64,
    pub covariate: f64,
}

/// Build `y = w_w·within + w_b·between + w_c·covariate + ε` per region.
///
/// The noise draw is keyed by region id alone, so permuting, dropping, or
/// adding rows never changes any other row's target.
pub fn synth_targets(
    rows: &[TargetInput],
    weights: &TargetWeights,
    noise_sd: f64,
    seed: u64,
) -> Result<Vec<(String, f64)>> {
    if !noise_sd.is_finite() || noise_sd < 0.0 {
        return Err(Error::Validation(format!(
            "target noise sd must be a non-negative real, got {noise_sd}"
        )));
    }
    for w in [weights.within, weights.between, weights.covariate] {
        if !w.is_finite() {
            return Err(Error::Validation("target weights must be finite".into()));
        }
    }
    rows.iter()
        .map(|r| {
            for (label, v) in
                [("within", r.within), ("between", r.between), ("covariate", r.covariate)]
            {
                if !v.is_finite() {
                    return Err(Error::Validation(format!(
                        "region {}: {label} must be finite to build a target",
                        r.region_id
                    )));
                }
            }
            let mut rng = keyed_rng(seed, &format!("target-noise/{}", r.region_id), &[]);
            let draw: f64 = StandardNormal.sample(&mut rng);
            let eps = draw * noise_sd;
            let y = weights.within * r.within
                + weights.between * r.between
                + weights.covariate * r.covariate
                + eps;
            Ok((r.region_id.clone(), y))
        })
        .collect()
}
