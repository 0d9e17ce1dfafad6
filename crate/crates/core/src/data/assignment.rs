//! Cell-to-municipality-to-region assignment from overlap areas.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use crate::error::{Error, Result};

use super::grid::{expect_header, map_csv_open, parse_f64};

/// One row of the overlap table: how much of a cell lies in a municipality.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapRow {
    pub cell_id: String,
    pub municipality_id: String,
    pub overlap_km2: f64,
}

/// One row of the municipality-to-region map.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMapRow {
    pub municipality_id: String,
    pub region_id: String,
}

/// Hard assignment of each retained cell to exactly one municipality and its
/// region. Deterministic: independent of input row order.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    // cell_id -> (municipality_id, region_id)
    cells: BTreeMap<String, (String, String)>,
}

impl Assignment {
    pub fn municipality_of(&self, cell_id: &str) -> Option<&str> {
        self.cells.get(cell_id).map(|(m, _)| m.as_str())
    }

    pub fn region_of(&self, cell_id: &str) -> Option<&str> {
        self.cells.get(cell_id).map(|(_, r)| r.as_str())
    }

    /// All retained cells in ascending cell_id order.
    pub fn cells(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.cells.iter().map(|(c, (m, r))| (c.as_str(), m.as_str(), r.as_str()))
    }

    /// Region ids in ascending order.
    pub fn region_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> =
            self.cells.values().map(|(_, r)| r.clone()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        ids.sort();
        ids
    }

    /// Cells assigned to a region, in ascending cell_id order.
    pub fn cells_of_region(&self, region_id: &str) -> Vec<&str> {
        self.cells
            .iter()
            .filter(|(_, (_, r))| r == region_id)
            .map(|(c, _)| c.as_str())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Assign each cell to the municipality of maximum overlap.
///
/// Ties are broken by lexicographically smallest municipality_id. Cells with
/// zero total overlap are excluded with a warning, as are cells whose winning
/// municipality is absent from the region map (they lie outside the analyzed
/// regions). A municipality mapped to more than one region is an error.
pub fn assign_cells(
    overlaps: &[OverlapRow],
    region_map: &[RegionMapRow],
) -> Result<(Assignment, Vec<String>)> {
    let mut muni_region: HashMap<&str, &str> = HashMap::new();
    for row in region_map {
        if row.municipality_id.is_empty() {
            return Err(Error::Validation("empty municipality_id in region map".into()));
        }
        if row.region_id.is_empty() {
            return Err(Error::Validation(format!(
                "municipality {} has no region",
                row.municipality_id
            )));
        }
        if let Some(prev) = muni_region.insert(&row.municipality_id, &row.region_id) {
            if prev != row.region_id {
                return Err(Error::Ingestion(format!(
                    "municipality {} mapped to two regions: {} and {}",
                    row.municipality_id, prev, row.region_id
                )));
            }
        }
    }

    // Per cell: total overlap and the winning (max overlap, lexicographic tie-break) municipality.
    let mut per_cell: BTreeMap<&str, (f64, Option<(&str, f64)>)> = BTreeMap::new();
    for row in overlaps {
        if !row.overlap_km2.is_finite() || row.overlap_km2 < 0.0 {
            return Err(Error::Validation(format!(
                "cell {} municipality {}: overlap_km2 must be non-negative, got {}",
                row.cell_id, row.municipality_id, row.overlap_km2
            )));
        }
        let entry = per_cell.entry(&row.cell_id).or_insert((0.0, None));
        entry.0 += row.overlap_km2;
        let replace = match entry.1 {
            None => true,
            Some((best_m, best_o)) => {
                row.overlap_km2 > best_o
                    || (row.overlap_km2 == best_o && row.municipality_id.as_str() < best_m)
            }
        };
        if replace {
            entry.1 = Some((&row.municipality_id, row.overlap_km2));
        }
    }

    let mut warnings = Vec::new();
    let mut cells = BTreeMap::new();
    for (cell_id, (total, best)) in per_cell {
        if total <= 0.0 {
            warnings.push(format!("cell {cell_id}: zero total overlap, excluded"));
            continue;
        }
        let (muni, _) = best.expect("positive total implies at least one row");
        match muni_region.get(muni) {
            Some(region) => {
                cells.insert(cell_id.to_string(), (muni.to_string(), region.to_string()));
            }
            None => {
                warnings.push(format!(
                    "cell {cell_id}: max-overlap municipality {muni} outside analyzed regions, excluded"
                ));
            }
        }
    }

    Ok((Assignment { cells }, warnings))
}

/// Load `overlaps.csv` with header `cell_id,municipality_id,overlap_km2`.
pub fn load_overlaps(path: &Path) -> Result<Vec<OverlapRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| map_csv_open(path, e))?;
    expect_header(path, &mut reader, &["cell_id", "municipality_id", "overlap_km2"])?;

    let mut rows = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx as u64 + 2;
        let record = record.map_err(|e| Error::parse(path, line, e.to_string()))?;
        if record.len() != 3 {
            return Err(Error::parse(path, line, format!("expected 3 fields, got {}", record.len())));
        }
        rows.push(OverlapRow {
            cell_id: record[0].to_string(),
            municipality_id: record[1].to_string(),
            overlap_km2: parse_f64(path, line, "overlap_km2", &record[2])?,
        });
    }
    Ok(rows)
}

/// Load `regions.csv` with header `municipality_id,region_id`.
pub fn load_region_map(path: &Path) -> Result<Vec<RegionMapRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| map_csv_open(path, e))?;
    expect_header(path, &mut reader, &["municipality_id", "region_id"])?;

    let mut rows = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx as u64 + 2;
        let record = record.map_err(|e| Error::parse(path, line, e.to_string()))?;
        if record.len() != 2 {
            return Err(Error::parse(path, line, format!("expected 2 fields, got {}", record.len())));
        }
        rows.push(RegionMapRow {
            municipality_id: record[0].to_string(),
            region_id: record[1].to_string(),
        });
    }
    Ok(rows)
}

/// Write `overlaps.csv` in the schema [`load_overlaps`] reads.
pub fn write_overlaps_csv<W: std::io::Write>(rows: &[OverlapRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "cell_id,municipality_id,overlap_km2")?;
    for r in rows {
        writeln!(out, "{},{},{}", r.cell_id, r.municipality_id, r.overlap_km2)?;
    }
    Ok(())
}

/// Write `regions.csv` in the schema [`load_region_map`] reads.
pub fn write_region_map_csv<W: std::io::Write>(
    rows: &[RegionMapRow],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "municipality_id,region_id")?;
    for r in rows {
        writeln!(out, "{},{}", r.municipality_id, r.region_id)?;
    }
    Ok(())
}
