//! Latent-factor generator for synthetic activity datasets.
//!
//! Every cell's log-activity on a given day is a convex mix of a region
//! factor, a municipality factor, and idiosyncratic noise:
//!
//! ```text
//! s_i(d, t) = γ · g_region(d, t) + α · g_muni(d, t) + max(0, 1 − α − γ) · ε_i(d, t)
//! count     = round(profile[t] · exp(s_i))
//! ```
//!
//! All factors are standard normal draws from keyed streams, so the output
//! is a pure function of [`SynthSpec`] (seed included) — independent of
//! thread count and insertion order.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::data::{assign_cells, Assignment, Cell, CellGrid, OverlapRow, RegionMapRow};
use crate::data::{ActivityCube, CellSeries};
use crate::error::Result;
use crate::rng::keyed_rng;

use super::spec::{GroundTruth, RegionTruth, SynthSpec};

/// Everything the generator produces for one spec.
#[derive(Debug)]
pub struct SynthOutput {
    pub cube: ActivityCube,
    pub grid: CellGrid,
    pub overlaps: Vec<OverlapRow>,
    pub region_map: Vec<RegionMapRow>,
    pub assignment: Assignment,
    /// `(region_id, covariate)` rows, sorted by region id.
    pub covariates: Vec<(String, f64)>,
    pub truth: GroundTruth,
}

/// First day of the generated range.
pub const SYNTH_START_DAY: &str = "2015-04-01";

fn draw_day(rng: &mut impl Rng, n_slots: usize) -> Vec<f64> {
    (0..n_slots).map(|_| StandardNormal.sample(rng)).collect()
}

/// Generate a complete synthetic dataset from a validated spec.
pub fn generate(spec: &SynthSpec) -> Result<SynthOutput> {
    spec.validate()?;
    let n_slots = spec.n_slots();
    let start_day: NaiveDate =
        SYNTH_START_DAY.parse().expect("SYNTH_START_DAY is a valid date");

    let mut cells: Vec<Cell> = Vec::new();
    let mut overlaps: Vec<OverlapRow> = Vec::new();
    let mut region_map: Vec<RegionMapRow> = Vec::new();
    let mut covariates: Vec<(String, f64)> = Vec::new();
    let mut region_truths: Vec<RegionTruth> = Vec::new();
    // (cell_id, region_index, muni_index), in generation = id order.
    let mut cell_plan: Vec<(String, usize, usize)> = Vec::new();

    for (ri, region) in spec.regions.iter().enumerate() {
        let region_id = format!("R{:02}", ri + 1);
        // A deterministic region-level covariate correlated with coupling:
        // useful as an exogenous regressor when exercising the importance
        // pipeline on synthetic data.
        let covariate = {
            let mut rng = keyed_rng(spec.seed, &format!("covariate/{region_id}"), &[]);
            let draw: f64 = StandardNormal.sample(&mut rng);
            10.0 * region.within_coupling + 5.0 * region.between_coupling + 0.5 * draw
        };
        covariates.push((region_id.clone(), covariate));
        region_truths.push(RegionTruth {
            region_id: region_id.clone(),
            n_municipalities: region.n_municipalities,
            cells_per_municipality: region.cells_per_municipality,
            within_coupling: region.within_coupling,
            between_coupling: region.between_coupling,
            covariate,
        });

        for mi in 0..region.n_municipalities {
            let muni_id = format!("{region_id}M{:02}", mi + 1);
            region_map.push(RegionMapRow {
                municipality_id: muni_id.clone(),
                region_id: region_id.clone(),
            });
            for ci in 0..region.cells_per_municipality {
                let cell_id = format!("{muni_id}C{:03}", ci + 1);
                // Centroids on a jittered grid around (9°E, 45°N); spacing
                // keeps distinct cells from coinciding so spatial weights
                // stay well-defined downstream.
                let flat = cell_plan.len() as f64;
                let row = (flat / 16.0).floor();
                let col = flat - 16.0 * row;
                let mut jrng = keyed_rng(spec.seed, &format!("centroid/{cell_id}"), &[]);
                cells.push(Cell {
                    cell_id: cell_id.clone(),
                    centroid_lon: 9.0 + 0.02 * col + 0.004 * jrng.gen::<f64>(),
                    centroid_lat: 45.0 + 0.02 * row + 0.004 * jrng.gen::<f64>(),
                    area_km2: 0.25 + 0.5 * jrng.gen::<f64>(),
                });
                overlaps.push(OverlapRow {
                    cell_id: cell_id.clone(),
                    municipality_id: muni_id.clone(),
                    overlap_km2: cells.last().expect("just pushed").area_km2,
                });
                cell_plan.push((cell_id, ri, mi));
            }
        }
    }

    let (grid, grid_warnings) = CellGrid::new(cells)?;
    debug_assert!(grid_warnings.is_empty(), "synthetic areas are in range");
    let (assignment, warnings) = assign_cells(&overlaps, &region_map)?;
    debug_assert!(warnings.is_empty(), "synthetic assignment is always total");

    // Latent factors, keyed per entity and day so any subset of the data can
    // be regenerated without replaying the rest.
    let mut region_factors: Vec<Vec<Vec<f64>>> = Vec::with_capacity(spec.regions.len());
    let mut muni_factors: Vec<Vec<Vec<Vec<f64>>>> = Vec::with_capacity(spec.regions.len());
    for (ri, region) in spec.regions.iter().enumerate() {
        let region_id = format!("R{:02}", ri + 1);
        let per_day: Vec<Vec<f64>> = (0..spec.n_days)
            .map(|d| {
                let mut rng =
                    keyed_rng(spec.seed, &format!("region-factor/{region_id}"), &[d as u64]);
                draw_day(&mut rng, n_slots)
            })
            .collect();
        region_factors.push(per_day);

        let munis: Vec<Vec<Vec<f64>>> = (0..region.n_municipalities)
            .map(|mi| {
                let muni_id = format!("{region_id}M{:02}", mi + 1);
                (0..spec.n_days)
                    .map(|d| {
                        let mut rng =
                            keyed_rng(spec.seed, &format!("muni-factor/{muni_id}"), &[d as u64]);
                        draw_day(&mut rng, n_slots)
                    })
                    .collect()
            })
            .collect();
        muni_factors.push(munis);
    }

    // Parallel across cells: each cell's stream is keyed independently, so
    // the result is identical to the sequential order.
    let series: BTreeMap<String, CellSeries> = cell_plan
        .par_iter()
        .map(|(cell_id, ri, mi)| {
            let region = &spec.regions[*ri];
            let alpha = region.within_coupling;
            let gamma = region.between_coupling;
            let eps_w = (1.0 - alpha - gamma).max(0.0);

            let n_total = spec.n_days * n_slots;
            let mut values = Vec::with_capacity(n_total);
            for d in 0..spec.n_days {
                let mut rng = keyed_rng(spec.seed, &format!("cell-noise/{cell_id}"), &[d as u64]);
                let g_r = &region_factors[*ri][d];
                let g_m = &muni_factors[*ri][*mi][d];
                for t in 0..n_slots {
                    let draw: f64 = StandardNormal.sample(&mut rng);
                    let s = gamma * g_r[t] + alpha * g_m[t] + eps_w * draw * spec.noise_sd;
                    let count = (spec.profile[t] * s.exp()).round();
                    values.push(count.clamp(0.0, f64::from(u32::MAX)) as u32);
                }
            }
            (cell_id.clone(), CellSeries { values, present: vec![true; n_total] })
        })
        .collect();

    let cube = ActivityCube::from_parts(series, start_day, spec.n_days, spec.slot_width_hours)?;

    let truth = GroundTruth {
        seed: spec.seed,
        n_days: spec.n_days,
        slot_width_hours: spec.slot_width_hours,
        noise_sd: spec.noise_sd,
        regions: region_truths,
    };

    Ok(SynthOutput { cube, grid, overlaps, region_map, assignment, covariates, truth })
}
