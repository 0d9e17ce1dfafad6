//! `cellsync regress`: one OLS fit per target with the full importance
//! suite, over the region-level design [within, between, covariates...].

use std::collections::BTreeMap;

use cellsync_core::data::load_columns;
use cellsync_core::importance::{
    build_importance_report, correlation_matrix, write_correlation_csv, write_dominance_csv,
    write_importance_json, write_importance_summary_csv, DesignSpec, ImportanceReport,
};
use cellsync_core::{Error, Result};

use crate::args::RegressArgs;
use crate::artifacts::{
    create_out_dir, read_sync_csv, require_stage_file, write_artifact, write_run_config,
};

use super::screen::{BETWEEN_VAR, WITHIN_VAR};
use super::{emit_warnings, with_pool};

pub fn run(a: &RegressArgs) -> Result<()> {
    with_pool(a.common.threads, || {
        require_stage_file(&a.sync, "sync")?;
        let sync_rows = read_sync_csv(&a.sync)?;

        let (cov_names, cov_rows): (Vec<String>, BTreeMap<String, Vec<f64>>) = match &a.covariates
        {
            Some(path) => load_columns(path)?,
            None => (Vec::new(), BTreeMap::new()),
        };
        let (tgt_names, tgt_rows) = load_columns(&a.targets)?;
        for name in cov_names.iter().chain(&tgt_names) {
            if name == WITHIN_VAR || name == BETWEEN_VAR {
                return Err(Error::Ingestion(format!(
                    "column name {name:?} collides with a synchronization index column"
                )));
            }
        }
        for t in &tgt_names {
            if cov_names.contains(t) {
                return Err(Error::Ingestion(format!(
                    "column {t:?} appears in both covariates and targets"
                )));
            }
        }

        // Usable regions: both sync indices present, plus rows in every
        // provided table. Kept in sorted region order.
        let mut regions: Vec<&crate::artifacts::SyncRow> = Vec::new();
        let mut warnings = Vec::new();
        for row in &sync_rows {
            if row.within_mean.is_none() || row.between_mean.is_none() {
                warnings.push(format!(
                    "region {}: missing within/between index; excluded from regression",
                    row.region_id
                ));
                continue;
            }
            if a.covariates.is_some() && !cov_rows.contains_key(&row.region_id) {
                warnings.push(format!(
                    "region {}: no covariate row; excluded from regression",
                    row.region_id
                ));
                continue;
            }
            if !tgt_rows.contains_key(&row.region_id) {
                warnings.push(format!(
                    "region {}: no target row; excluded from regression",
                    row.region_id
                ));
                continue;
            }
            regions.push(row);
        }
        for id in tgt_rows.keys() {
            if !sync_rows.iter().any(|r| &r.region_id == id) {
                warnings.push(format!("region {id}: targets but no sync row; excluded"));
            }
        }
        emit_warnings(&warnings);

        let mut regressor_names = vec![WITHIN_VAR.to_string(), BETWEEN_VAR.to_string()];
        regressor_names.extend(cov_names.iter().cloned());
        let mut x: Vec<Vec<f64>> = vec![
            regions.iter().map(|r| r.within_mean.expect("filtered")).collect(),
            regions.iter().map(|r| r.between_mean.expect("filtered")).collect(),
        ];
        for (j, _) in cov_names.iter().enumerate() {
            x.push(regions.iter().map(|r| cov_rows[&r.region_id][j]).collect());
        }

        let mut reports: Vec<ImportanceReport> = Vec::with_capacity(tgt_names.len());
        for (j, target) in tgt_names.iter().enumerate() {
            let y: Vec<f64> = regions.iter().map(|r| tgt_rows[&r.region_id][j]).collect();
            let spec = DesignSpec::new(target.clone(), regressor_names.clone(), y, x.clone())?;
            reports.push(build_importance_report(&spec)?);
        }

        // Appendix-style correlation matrix over regressors and targets.
        let mut corr_names = regressor_names.clone();
        corr_names.extend(tgt_names.iter().cloned());
        let mut corr_cols = x.clone();
        for (j, _) in tgt_names.iter().enumerate() {
            corr_cols.push(regions.iter().map(|r| tgt_rows[&r.region_id][j]).collect());
        }
        let corr = correlation_matrix(&corr_names, &corr_cols)?;

        let dir = &a.common.out;
        create_out_dir(dir)?;
        write_artifact(dir, "importance.json", |w| {
            write_importance_json(&reports, &mut *w)
                .map_err(|e| std::io::Error::other(e.to_string()))?;
            use std::io::Write as _;
            writeln!(w)
        })?;
        write_artifact(dir, "importance_summary.csv", |w| {
            write_importance_summary_csv(&reports, w)
        })?;
        write_artifact(dir, "dominance_verdicts.csv", |w| write_dominance_csv(&reports, w))?;
        write_artifact(dir, "correlation.csv", |w| write_correlation_csv(&corr, w))?;
        write_run_config(dir, "regress", a)?;

        println!(
            "wrote {} ({} targets, {} regions, {} regressors)",
            dir.display(),
            reports.len(),
            regions.len(),
            regressor_names.len()
        );
        Ok(())
    })
}
