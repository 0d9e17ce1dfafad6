//! On-disk handoff between stages: config provenance, artifact helpers,
//! and readers for the CSVs earlier stages emit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use cellsync_core::{Error, Result};
use serde::Serialize;

/// Provenance wrapper written as `run_config_<command>.json`.
#[derive(Serialize)]
struct RunConfig<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    args: &'a T,
}

pub fn write_run_config<T: Serialize>(out_dir: &Path, command: &str, args: &T) -> Result<()> {
    let cfg = RunConfig {
        tool: "cellsync",
        version: env!("CARGO_PKG_VERSION"),
        command,
        args,
    };
    let path = out_dir.join(format!("run_config_{command}.json"));
    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &cfg)
        .map_err(|e| Error::Validation(format!("serializing run config: {e}")))?;
    writeln!(w).map_err(|e| Error::io(&path, e))?;
    Ok(())
}

pub fn create_out_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Write one artifact through a buffered writer, mapping io errors to the
/// pipeline error type.
pub fn write_artifact(
    dir: &Path,
    name: &str,
    f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<PathBuf> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).map_err(|e| Error::io(&path, e))?;
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Fail with a pointer to the producing command when a stage input from a
/// previous stage is missing.
pub fn require_stage_file(path: &Path, producer: &str) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "missing {}: run `cellsync {producer}` first",
            path.display()
        )))
    }
}

/// One row of `sync.csv`; absent classes read back as `None`.
#[derive(Debug, Clone, Serialize)]
pub struct SyncRow {
    pub region_id: String,
    pub within_mean: Option<f64>,
    pub within_median: Option<f64>,
    pub within_n: usize,
    pub between_mean: Option<f64>,
    pub between_median: Option<f64>,
    pub between_n: usize,
}

const SYNC_HEADER: [&str; 7] = [
    "region_id",
    "within_mean",
    "within_median",
    "within_n",
    "between_mean",
    "between_median",
    "between_n",
];

fn parse_opt_f64(path: &Path, line: u64, field: &str, raw: &str) -> Result<Option<f64>> {
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse::<f64>()
        .map(Some)
        .map_err(|_| Error::parse(path, line, format!("{field}: not a number: {raw:?}")))
}

fn parse_usize(path: &Path, line: u64, field: &str, raw: &str) -> Result<usize> {
    raw.parse::<usize>()
        .map_err(|_| Error::parse(path, line, format!("{field}: not a count: {raw:?}")))
}

pub fn read_sync_csv(path: &Path) -> Result<Vec<SyncRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
    let header = reader
        .headers()
        .map_err(|e| Error::parse(path, 1, e.to_string()))?
        .clone();
    if header.iter().collect::<Vec<_>>() != SYNC_HEADER {
        return Err(Error::parse(
            path,
            1,
            format!("unexpected sync.csv header: {}", header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let r = record.map_err(|e| Error::parse(path, line, e.to_string()))?;
        if r.len() != SYNC_HEADER.len() {
            return Err(Error::parse(path, line, format!("expected 7 fields, got {}", r.len())));
        }
        rows.push(SyncRow {
            region_id: r[0].to_string(),
            within_mean: parse_opt_f64(path, line, "within_mean", &r[1])?,
            within_median: parse_opt_f64(path, line, "within_median", &r[2])?,
            within_n: parse_usize(path, line, "within_n", &r[3])?,
            between_mean: parse_opt_f64(path, line, "between_mean", &r[4])?,
            between_median: parse_opt_f64(path, line, "between_median", &r[5])?,
            between_n: parse_usize(path, line, "between_n", &r[6])?,
        });
    }
    if rows.is_empty() {
        return Err(Error::Validation(format!("{}: no regions", path.display())));
    }
    Ok(rows)
}

/// One row of `moran.csv`, for bundling into the report.
#[derive(Debug, Clone, Serialize)]
pub struct MoranRow {
    pub variable: String,
    pub observed_i: f64,
    pub expected_i: f64,
    pub p_value: f64,
    pub n_permutations: usize,
    pub seed: u64,
    pub scheme: String,
}

pub fn read_moran_csv(path: &Path) -> Result<Vec<MoranRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let r = record.map_err(|e| Error::parse(path, line, e.to_string()))?;
        if r.len() != 7 {
            return Err(Error::parse(path, line, format!("expected 7 fields, got {}", r.len())));
        }
        let f = |field: &str, raw: &str| -> Result<f64> {
            raw.parse::<f64>()
                .map_err(|_| Error::parse(path, line, format!("{field}: not a number: {raw:?}")))
        };
        rows.push(MoranRow {
            variable: r[0].to_string(),
            observed_i: f("I", &r[1])?,
            expected_i: f("expected_I", &r[2])?,
            p_value: f("p_value", &r[3])?,
            n_permutations: parse_usize(path, line, "n_permutations", &r[4])?,
            seed: r[5]
                .parse::<u64>()
                .map_err(|_| Error::parse(path, line, format!("seed: not an integer: {:?}", &r[5])))?,
            scheme: r[6].to_string(),
        });
    }
    Ok(rows)
}

/// Read a JSON artifact into a generic value for report bundling.
pub fn read_json_value(path: &Path) -> Result<serde_json::Value> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(std::io::BufReader::new(file))
        .map_err(|e| Error::parse(path, 0, e.to_string()))
}
