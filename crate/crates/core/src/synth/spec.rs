//! Generator configuration and the ground truth it promises.

use serde::Serialize;

use crate::error::{Error, Result};

/// One region template: municipalities × cells with coupling strengths.
#[derive(Debug, Clone, Serialize)]
pub struct RegionSpec {
    pub n_municipalities: usize,
    pub cells_per_municipality: usize,
    /// α: weight of the shared municipality factor (drives within sync).
    pub within_coupling: f64,
    /// γ: weight of the shared region factor (drives between sync).
    pub between_coupling: f64,
}

/// Full generator configuration.
#[derive(Debug, Clone, Serialize)]
pub struct SynthSpec {
    pub regions: Vec<RegionSpec>,
    pub n_days: usize,
    pub slot_width_hours: u32,
    /// Multiplicative circadian profile, one positive level per slot.
    pub profile: Vec<f64>,
    /// Standard deviation of the per-cell idiosyncratic noise ε.
    pub noise_sd: f64,
    pub seed: u64,
}

impl SynthSpec {
    /// Slots per day implied by the slot width.
    pub fn n_slots(&self) -> usize {
        (24 / self.slot_width_hours) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.regions.is_empty() {
            return Err(Error::Validation("synth spec has no regions".into()));
        }
        if self.regions.len() > 99 {
            return Err(Error::Validation("synth spec supports at most 99 regions".into()));
        }
        for (i, r) in self.regions.iter().enumerate() {
            if r.n_municipalities == 0 || r.n_municipalities > 99 {
                return Err(Error::Validation(format!(
                    "region {i}: n_municipalities must be in 1..=99"
                )));
            }
            if r.cells_per_municipality == 0 || r.cells_per_municipality > 999 {
                return Err(Error::Validation(format!(
                    "region {i}: cells_per_municipality must be in 1..=999"
                )));
            }
            for (label, v) in
                [("within_coupling", r.within_coupling), ("between_coupling", r.between_coupling)]
            {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Validation(format!(
                        "region {i}: {label} must be in [0, 1], got {v}"
                    )));
                }
            }
        }
        if self.n_days < 2 {
            return Err(Error::Validation("n_days must be ≥ 2".into()));
        }
        if self.slot_width_hours != 1 && self.slot_width_hours != 2 {
            return Err(Error::Validation(format!(
                "slot_width_hours must be 1 or 2, got {}",
                self.slot_width_hours
            )));
        }
        if self.profile.len() != self.n_slots() {
            return Err(Error::Validation(format!(
                "profile length {} does not match {} slots",
                self.profile.len(),
                self.n_slots()
            )));
        }
        if self.profile.iter().any(|&p| !p.is_finite() || p <= 0.0) {
            return Err(Error::Validation("profile entries must be positive reals".into()));
        }
        if !self.noise_sd.is_finite() || self.noise_sd < 0.0 {
            return Err(Error::Validation(format!(
                "noise_sd must be a non-negative real, got {}",
                self.noise_sd
            )));
        }
        Ok(())
    }
}

/// The parameters a synthetic dataset was generated with (`truth.json`).
#[derive(Debug, Clone, Serialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub n_days: usize,
    pub slot_width_hours: u32,
    pub noise_sd: f64,
    pub regions: Vec<RegionTruth>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionTruth {
    pub region_id: String,
    pub n_municipalities: usize,
    pub cells_per_municipality: usize,
    pub within_coupling: f64,
    pub between_coupling: f64,
    /// Region-level convenience covariate emitted for regression tests.
    pub covariate: f64,
}
