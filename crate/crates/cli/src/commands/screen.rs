//! `cellsync screen`: Moran's I spatial-autocorrelation test over the
//! region-level variables (sync indices, covariates, targets).

use std::collections::BTreeMap;

use cellsync_core::data::{assign_cells, load_cells, load_columns, load_overlaps, load_region_map};
use cellsync_core::spatial::{build_weights, morans_i, write_moran_csv, WeightScheme};
use cellsync_core::{Error, Result};

use crate::args::{ScreenArgs, WeightsArg};
use crate::artifacts::{
    create_out_dir, read_sync_csv, require_stage_file, write_artifact, write_run_config,
};

use super::{emit_warnings, with_pool};

/// Variable names used for the sync indices across screen and regress.
pub const WITHIN_VAR: &str = "within_sync";
pub const BETWEEN_VAR: &str = "between_sync";

/// Region centroid = arithmetic mean of member-cell centroids. Regions are
/// tens of km across, so planar averaging of lon/lat is adequate.
pub fn region_centroids(
    assignment: &cellsync_core::data::Assignment,
    grid: &cellsync_core::data::CellGrid,
) -> Result<BTreeMap<String, (f64, f64)>> {
    let mut acc: BTreeMap<String, (f64, f64, usize)> = BTreeMap::new();
    for (cell_id, _muni, region_id) in assignment.cells() {
        let cell = grid.get(cell_id).ok_or_else(|| {
            Error::Validation(format!("cell {cell_id} is assigned but missing from cells.csv"))
        })?;
        let e = acc.entry(region_id.to_string()).or_insert((0.0, 0.0, 0));
        e.0 += cell.centroid_lon;
        e.1 += cell.centroid_lat;
        e.2 += 1;
    }
    Ok(acc
        .into_iter()
        .map(|(region, (lon, lat, n))| (region, (lon / n as f64, lat / n as f64)))
        .collect())
}

/// Load extra `region_id,<name>,...` columns as (name, region -> value).
fn named_columns(path: &std::path::Path) -> Result<Vec<(String, BTreeMap<String, f64>)>> {
    let (names, rows) = load_columns(path)?;
    Ok(names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let col = rows.iter().map(|(id, row)| (id.clone(), row[j])).collect();
            (name.clone(), col)
        })
        .collect())
}

pub fn run(a: &ScreenArgs) -> Result<()> {
    with_pool(a.common.threads, || {
        require_stage_file(&a.sync, "sync")?;
        let sync_rows = read_sync_csv(&a.sync)?;
        let (grid, grid_warnings) = load_cells(&a.cells)?;
        emit_warnings(&grid_warnings);
        let overlaps = load_overlaps(&a.overlaps)?;
        let region_map = load_region_map(&a.regions)?;
        let (assignment, warnings) = assign_cells(&overlaps, &region_map)?;
        emit_warnings(&warnings);
        let centroids = region_centroids(&assignment, &grid)?;

        // Assemble the screened variables as region -> value maps.
        let mut variables: Vec<(String, BTreeMap<String, f64>)> = Vec::new();
        let sync_col = |pick: fn(&crate::artifacts::SyncRow) -> Option<f64>| {
            sync_rows
                .iter()
                .filter_map(|r| pick(r).map(|v| (r.region_id.clone(), v)))
                .collect::<BTreeMap<_, _>>()
        };
        variables.push((WITHIN_VAR.to_string(), sync_col(|r| r.within_mean)));
        variables.push((BETWEEN_VAR.to_string(), sync_col(|r| r.between_mean)));
        if let Some(path) = &a.covariates {
            variables.extend(named_columns(path)?);
        }
        if let Some(path) = &a.targets {
            variables.extend(named_columns(path)?);
        }
        {
            let mut seen = std::collections::BTreeSet::new();
            for (name, _) in &variables {
                if !seen.insert(name.clone()) {
                    return Err(Error::Ingestion(format!(
                        "variable {name:?} appears more than once across sync/covariates/targets"
                    )));
                }
            }
        }

        let scheme = || match a.weights {
            WeightsArg::Invdist => WeightScheme::InverseDistance,
            WeightsArg::Knn => WeightScheme::KNearest { k: a.knn_k },
        };

        // Each variable is tested over the regions where it is defined and
        // located; the weight matrix is rebuilt on that subset.
        let mut results = Vec::with_capacity(variables.len());
        for (name, by_region) in &variables {
            let mut points: Vec<(String, f64, f64)> = Vec::new();
            let mut values: Vec<f64> = Vec::new();
            let mut skipped: Vec<&str> = Vec::new();
            for (region, &value) in by_region {
                match centroids.get(region) {
                    Some(&(lon, lat)) => {
                        points.push((region.clone(), lon, lat));
                        values.push(value);
                    }
                    None => skipped.push(region),
                }
            }
            if !skipped.is_empty() {
                eprintln!(
                    "warning: {name}: {} regions without located cells skipped ({})",
                    skipped.len(),
                    skipped.join(", ")
                );
            }
            let weights = build_weights(&points, scheme())
                .map_err(|e| Error::Validation(format!("{name}: {e}")))?;
            results.push(morans_i(name, &values, &weights, a.permutations, a.seed)?);
        }

        let dir = &a.common.out;
        create_out_dir(dir)?;
        write_artifact(dir, "moran.csv", |w| write_moran_csv(&results, w))?;
        write_run_config(dir, "screen", a)?;

        println!(
            "wrote {} ({} variables, {} permutations)",
            dir.join("moran.csv").display(),
            results.len(),
            a.permutations
        );
        Ok(())
    })
}
