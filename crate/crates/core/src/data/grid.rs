//! The spatial grid of network cells.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

/// One grid cell: an antenna coverage area with a representative centroid.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub cell_id: String,
    pub centroid_lon: f64,
    pub centroid_lat: f64,
    pub area_km2: f64,
}

/// The irregular grid of cells covering the study area.
///
/// Cell ids are unique. Areas outside the expected 0.04–40 km² range are
/// accepted with a warning.
#[derive(Debug, Clone)]
pub struct CellGrid {
    cells: Vec<Cell>,
    index: HashMap<String, usize>,
}

impl CellGrid {
    /// Build a grid from cells, validating id uniqueness and warning on
    /// out-of-range areas.
    pub fn new(cells: Vec<Cell>) -> Result<(Self, Vec<String>)> {
        let mut warnings = Vec::new();
        let mut index = HashMap::with_capacity(cells.len());
        for (i, cell) in cells.iter().enumerate() {
            if cell.cell_id.is_empty() {
                return Err(Error::Validation("empty cell_id in grid".into()));
            }
            if !cell.area_km2.is_finite() || cell.area_km2 <= 0.0 {
                return Err(Error::Validation(format!(
                    "cell {}: area_km2 must be a positive real, got {}",
                    cell.cell_id, cell.area_km2
                )));
            }
            if !(0.04..=40.0).contains(&cell.area_km2) {
                warnings.push(format!(
                    "cell {}: area {} km2 outside expected range [0.04, 40]",
                    cell.cell_id, cell.area_km2
                ));
            }
            if index.insert(cell.cell_id.clone(), i).is_some() {
                return Err(Error::Ingestion(format!("duplicate cell_id {}", cell.cell_id)));
            }
        }
        Ok((CellGrid { cells, index }, warnings))
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn get(&self, cell_id: &str) -> Option<&Cell> {
        self.index.get(cell_id).map(|&i| &self.cells[i])
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Load `cells.csv` with header `cell_id,centroid_lon,centroid_lat,area_km2`.
pub fn load_cells(path: &Path) -> Result<(CellGrid, Vec<String>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| map_csv_open(path, e))?;

    expect_header(path, &mut reader, &["cell_id", "centroid_lon", "centroid_lat", "area_km2"])?;

    let mut cells = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx as u64 + 2;
        let record = record.map_err(|e| Error::parse(path, line, e.to_string()))?;
        if record.len() != 4 {
            return Err(Error::parse(path, line, format!("expected 4 fields, got {}", record.len())));
        }
        let cell_id = record[0].to_string();
        let lon = parse_f64(path, line, "centroid_lon", &record[1])?;
        let lat = parse_f64(path, line, "centroid_lat", &record[2])?;
        let area = parse_f64(path, line, "area_km2", &record[3])?;
        cells.push(Cell { cell_id, centroid_lon: lon, centroid_lat: lat, area_km2: area });
    }
    CellGrid::new(cells)
}

pub(crate) fn parse_f64(path: &Path, line: u64, field: &str, raw: &str) -> Result<f64> {
    raw.parse::<f64>()
        .map_err(|_| Error::parse(path, line, format!("field {field}: not a number: {raw:?}")))
}

pub(crate) fn expect_header<R: std::io::Read>(
    path: &Path,
    reader: &mut csv::Reader<R>,
    expected: &[&str],
) -> Result<()> {
    let headers = reader.headers().map_err(|e| Error::parse(path, 1, e.to_string()))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::parse(
            path,
            1,
            format!("expected header {:?}, got {:?}", expected.join(","), got.join(",")),
        ));
    }
    Ok(())
}

/// Write `cells.csv` in the same schema [`load_cells`] reads.
pub fn write_cells_csv<W: std::io::Write>(grid: &CellGrid, mut out: W) -> std::io::Result<()> {
    writeln!(out, "cell_id,centroid_lon,centroid_lat,area_km2")?;
    for c in grid.cells() {
        writeln!(out, "{},{},{},{}", c.cell_id, c.centroid_lon, c.centroid_lat, c.area_km2)?;
    }
    Ok(())
}

/// Check that the first header column is `key` and return the remaining
/// column names (for files with arbitrary named numeric columns).
pub(crate) fn expect_header_prefix<R: std::io::Read>(
    path: &Path,
    reader: &mut csv::Reader<R>,
    key: &str,
) -> Result<Vec<String>> {
    let headers = reader.headers().map_err(|e| Error::parse(path, 1, e.to_string()))?;
    let mut iter = headers.iter();
    match iter.next() {
        Some(first) if first == key => {}
        other => {
            return Err(Error::parse(
                path,
                1,
                format!("expected first column {key:?}, got {:?}", other.unwrap_or("")),
            ));
        }
    }
    Ok(iter.map(str::to_string).collect())
}

pub(crate) fn map_csv_open(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::parse(path, 0, format!("{other:?}")),
    }
}
