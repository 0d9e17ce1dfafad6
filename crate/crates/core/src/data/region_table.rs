//! Region-level covariate and target columns merged into one table.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

use super::grid::{expect_header_prefix, map_csv_open, parse_f64};

/// Named numeric columns keyed by region, merged from the covariate and
/// target files. Regions are kept in sorted order; only regions present in
/// both files survive the merge (the rest are reported as warnings).
#[derive(Debug, Clone)]
pub struct RegionTable {
    region_ids: Vec<String>,
    covariate_names: Vec<String>,
    target_names: Vec<String>,
    /// Column-major, covariates first then targets; each column has
    /// `region_ids.len()` entries.
    columns: Vec<Vec<f64>>,
}

impl RegionTable {
    pub fn region_ids(&self) -> &[String] {
        &self.region_ids
    }

    pub fn covariate_names(&self) -> &[String] {
        &self.covariate_names
    }

    pub fn target_names(&self) -> &[String] {
        &self.target_names
    }

    pub fn n_regions(&self) -> usize {
        self.region_ids.len()
    }

    /// Look up a column (covariate or target) by name.
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        let nc = self.covariate_names.len();
        if let Some(i) = self.covariate_names.iter().position(|c| c == name) {
            return Some(&self.columns[i]);
        }
        self.target_names.iter().position(|t| t == name).map(|i| self.columns[nc + i].as_slice())
    }
}

/// Column names in file order alongside each region's row of values.
pub type NamedColumns = (Vec<String>, BTreeMap<String, Vec<f64>>);

/// Read one `region_id,<name>,...` file into (column names, region -> row).
fn load_named_columns(path: &Path) -> Result<NamedColumns> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| map_csv_open(path, e))?;
    let names = expect_header_prefix(path, &mut reader, "region_id")?;
    if names.is_empty() {
        return Err(Error::Validation(format!(
            "{}: no data columns besides region_id",
            path.display()
        )));
    }

    let mut rows: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx as u64 + 2;
        let record = record.map_err(|e| Error::parse(path, line, e.to_string()))?;
        if record.len() != names.len() + 1 {
            return Err(Error::parse(
                path,
                line,
                format!("expected {} fields, got {}", names.len() + 1, record.len()),
            ));
        }
        let region_id = record[0].to_string();
        if region_id.is_empty() {
            return Err(Error::parse(path, line, "empty region_id".to_string()));
        }
        let mut row = Vec::with_capacity(names.len());
        for (j, name) in names.iter().enumerate() {
            row.push(parse_f64(path, line, name, &record[j + 1])?);
        }
        if rows.insert(region_id.clone(), row).is_some() {
            return Err(Error::Ingestion(format!(
                "{}: duplicate region_id {region_id}",
                path.display()
            )));
        }
    }
    Ok((names, rows))
}

/// Load a single `region_id,<name>,...` file: column names plus one row of
/// values per region. For the merged covariates + targets view, use
/// [`load_region_table`].
pub fn load_columns(path: &Path) -> Result<NamedColumns> {
    load_named_columns(path)
}

/// Merge `covariates.csv` and `targets.csv` by `region_id`.
///
/// Returns the merged table plus warnings for regions present in only one
/// of the files (those regions are dropped). Column names must not collide
/// across the two files.
pub fn load_region_table(
    covariates_path: &Path,
    targets_path: &Path,
) -> Result<(RegionTable, Vec<String>)> {
    let (covariate_names, cov_rows) = load_named_columns(covariates_path)?;
    let (target_names, tgt_rows) = load_named_columns(targets_path)?;

    for t in &target_names {
        if covariate_names.contains(t) {
            return Err(Error::Ingestion(format!(
                "column {t:?} appears in both {} and {}",
                covariates_path.display(),
                targets_path.display()
            )));
        }
    }

    let mut warnings = Vec::new();
    let mut region_ids = Vec::new();
    for id in cov_rows.keys() {
        if tgt_rows.contains_key(id) {
            region_ids.push(id.clone());
        } else {
            warnings.push(format!("region {id} has covariates but no targets; dropped"));
        }
    }
    for id in tgt_rows.keys() {
        if !cov_rows.contains_key(id) {
            warnings.push(format!("region {id} has targets but no covariates; dropped"));
        }
    }
    if region_ids.is_empty() {
        return Err(Error::Validation(
            "no region appears in both covariates and targets".into(),
        ));
    }

    let n = region_ids.len();
    let mut columns =
        vec![Vec::with_capacity(n); covariate_names.len() + target_names.len()];
    for id in &region_ids {
        for (j, v) in cov_rows[id].iter().enumerate() {
            columns[j].push(*v);
        }
        for (j, v) in tgt_rows[id].iter().enumerate() {
            columns[covariate_names.len() + j].push(*v);
        }
    }

    Ok((RegionTable { region_ids, covariate_names, target_names, columns }, warnings))
}
