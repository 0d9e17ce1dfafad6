//! `cellsync synth`: generate a dataset with known ground truth, or build
//! synthetic targets from an existing sync run.

use std::io::Write;

use cellsync_core::data::{
    load_columns, write_canonical_activity_csv, write_cells_csv, write_overlaps_csv,
    write_region_map_csv,
};
use cellsync_core::synth::{
    generate, synth_targets, RegionSpec, SynthSpec, TargetInput, TargetWeights,
};
use cellsync_core::{Error, Result};

use crate::args::SynthArgs;
use crate::artifacts::{
    create_out_dir, read_sync_csv, require_stage_file, write_artifact, write_run_config,
};

use super::{emit_warnings, with_pool};

/// Column name of the generated region-level covariate.
pub const COVARIATE_NAME: &str = "income";

/// Hourly circadian base curve: quiet nights, midday peak.
fn hourly_profile() -> Vec<f64> {
    (0..24)
        .map(|h| {
            let x = (f64::from(h) - 6.0) / 14.0 * std::f64::consts::PI;
            30.0 + 170.0 * x.sin().max(0.0)
        })
        .collect()
}

fn default_profile(slot_width_hours: u32) -> Vec<f64> {
    let hourly = hourly_profile();
    match slot_width_hours {
        1 => hourly,
        2 => hourly.chunks(2).map(|pair| pair[0] + pair[1]).collect(),
        _ => unreachable!("slot width validated by clap"),
    }
}

fn parse_profile(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::Validation(format!("--profile: not a number: {tok:?}")))
        })
        .collect()
}

fn parse_region_spec(raw: &str) -> Result<RegionSpec> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 4 {
        return Err(Error::Validation(format!(
            "--region-spec expects munis:cells:alpha:gamma, got {raw:?}"
        )));
    }
    let usize_field = |label: &str, tok: &str| {
        tok.parse::<usize>()
            .map_err(|_| Error::Validation(format!("--region-spec {label}: not an integer: {tok:?}")))
    };
    let f64_field = |label: &str, tok: &str| {
        tok.parse::<f64>()
            .map_err(|_| Error::Validation(format!("--region-spec {label}: not a number: {tok:?}")))
    };
    Ok(RegionSpec {
        n_municipalities: usize_field("munis", parts[0])?,
        cells_per_municipality: usize_field("cells", parts[1])?,
        within_coupling: f64_field("alpha", parts[2])?,
        between_coupling: f64_field("gamma", parts[3])?,
    })
}

pub fn run(a: &SynthArgs) -> Result<()> {
    with_pool(a.common.threads, || match &a.from_sync {
        Some(sync_path) => targets_mode(a, sync_path),
        None => dataset_mode(a),
    })
}

fn dataset_mode(a: &SynthArgs) -> Result<()> {
    let regions = a
        .region_spec
        .iter()
        .map(|raw| parse_region_spec(raw))
        .collect::<Result<Vec<_>>>()?;
    let profile = match &a.profile {
        Some(raw) => parse_profile(raw)?,
        None => default_profile(a.slot_width_hours),
    };
    let spec = SynthSpec {
        regions,
        n_days: a.days,
        slot_width_hours: a.slot_width_hours,
        profile,
        noise_sd: a.noise_sd,
        seed: a.seed,
    };
    let out = generate(&spec)?;

    let dir = &a.common.out;
    create_out_dir(dir)?;
    write_artifact(dir, "activity.csv", |w| write_canonical_activity_csv(&out.cube, w))?;
    write_artifact(dir, "cells.csv", |w| write_cells_csv(&out.grid, w))?;
    write_artifact(dir, "overlaps.csv", |w| write_overlaps_csv(&out.overlaps, w))?;
    write_artifact(dir, "regions.csv", |w| write_region_map_csv(&out.region_map, w))?;
    write_artifact(dir, "covariates.csv", |w| {
        writeln!(w, "region_id,{COVARIATE_NAME}")?;
        for (region_id, value) in &out.covariates {
            writeln!(w, "{region_id},{value}")?;
        }
        Ok(())
    })?;
    write_artifact(dir, "truth.json", |w| {
        serde_json::to_writer_pretty(&mut *w, &out.truth)
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        writeln!(w)
    })?;
    write_run_config(dir, "synth", a)?;

    println!(
        "wrote {} (cells: {}, days: {}, regions: {})",
        dir.display(),
        out.cube.cell_ids().len(),
        out.cube.n_days(),
        out.truth.regions.len()
    );
    Ok(())
}

fn targets_mode(a: &SynthArgs, sync_path: &std::path::Path) -> Result<()> {
    require_stage_file(sync_path, "sync")?;
    let sync_rows = read_sync_csv(sync_path)?;

    // Optional covariate column keyed by region.
    let covariate_by_region = match &a.covariates {
        Some(path) => {
            let (names, rows) = load_columns(path)?;
            let idx = match &a.covariate_name {
                Some(name) => names.iter().position(|n| n == name).ok_or_else(|| {
                    Error::Validation(format!(
                        "--covariate-name {name:?} not in {} (columns: {})",
                        path.display(),
                        names.join(", ")
                    ))
                })?,
                None if names.len() == 1 => 0,
                None => {
                    return Err(Error::Validation(format!(
                        "{} has {} columns; pick one with --covariate-name",
                        path.display(),
                        names.len()
                    )))
                }
            };
            Some(rows.into_iter().map(|(id, row)| (id, row[idx])).collect::<std::collections::BTreeMap<_, _>>())
        }
        None => None,
    };

    let mut warnings = Vec::new();
    let mut inputs = Vec::new();
    for row in &sync_rows {
        let (Some(within), Some(between)) = (row.within_mean, row.between_mean) else {
            warnings.push(format!(
                "region {}: missing within/between index; no target emitted",
                row.region_id
            ));
            continue;
        };
        let covariate = match &covariate_by_region {
            Some(map) => match map.get(&row.region_id) {
                Some(&v) => v,
                None => {
                    warnings.push(format!(
                        "region {}: no covariate row; no target emitted",
                        row.region_id
                    ));
                    continue;
                }
            },
            None => 0.0,
        };
        inputs.push(TargetInput {
            region_id: row.region_id.clone(),
            within,
            between,
            covariate,
        });
    }
    emit_warnings(&warnings);
    if inputs.is_empty() {
        return Err(Error::Validation(
            "no region has both synchronization indices; cannot build targets".into(),
        ));
    }

    let weights = TargetWeights {
        within: a.w_within,
        between: a.w_between,
        covariate: a.w_covariate,
    };
    let targets = synth_targets(&inputs, &weights, a.target_noise_sd, a.seed)?;

    let dir = &a.common.out;
    create_out_dir(dir)?;
    let target_name = &a.target_name;
    write_artifact(dir, "targets.csv", |w| {
        writeln!(w, "region_id,{target_name}")?;
        for (region_id, y) in &targets {
            writeln!(w, "{region_id},{y}")?;
        }
        Ok(())
    })?;
    // Separate config name: targets mode must not clobber the provenance of
    // a dataset generated into the same directory.
    write_run_config(dir, "synth_targets", a)?;

    println!("wrote {} ({} regions)", dir.join("targets.csv").display(), targets.len());
    Ok(())
}
