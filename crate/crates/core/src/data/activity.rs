//! Per-cell, per-day, per-slot activity counts with an explicit missing mask.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;

use chrono::{Datelike, NaiveDate, Timelike};

use crate::error::{Error, Result};

use super::grid::{expect_header, map_csv_open};

/// One cell's count series, day-major: index `day * n_slots + slot`.
///
/// Zero is a real observation (no activity); absence is tracked separately
/// in `present`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSeries {
    pub values: Vec<u32>,
    pub present: Vec<bool>,
}

/// Activity counts for all cells over a contiguous day range.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityCube {
    cell_ids: Vec<String>,
    index: HashMap<String, usize>,
    series: Vec<CellSeries>,
    start_day: NaiveDate,
    n_days: usize,
    slot_width_hours: u32,
    n_slots: usize,
}

impl ActivityCube {
    /// Assemble a cube from per-cell series. Series must all have length
    /// `n_days * (24 / slot_width_hours)`.
    pub fn from_parts(
        cells: BTreeMap<String, CellSeries>,
        start_day: NaiveDate,
        n_days: usize,
        slot_width_hours: u32,
    ) -> Result<Self> {
        if slot_width_hours != 1 && slot_width_hours != 2 {
            return Err(Error::Validation(format!(
                "slot_width_hours must be 1 or 2, got {slot_width_hours}"
            )));
        }
        if n_days == 0 {
            return Err(Error::Validation("activity cube must cover at least one day".into()));
        }
        let n_slots = (24 / slot_width_hours) as usize;
        let expected = n_days * n_slots;
        let mut cell_ids = Vec::with_capacity(cells.len());
        let mut series = Vec::with_capacity(cells.len());
        let mut index = HashMap::with_capacity(cells.len());
        for (id, s) in cells {
            if s.values.len() != expected || s.present.len() != expected {
                return Err(Error::Validation(format!(
                    "cell {id}: series length {} != {expected}",
                    s.values.len()
                )));
            }
            index.insert(id.clone(), cell_ids.len());
            cell_ids.push(id);
            series.push(s);
        }
        Ok(ActivityCube { cell_ids, index, series, start_day, n_days, slot_width_hours, n_slots })
    }

    pub fn cell_ids(&self) -> &[String] {
        &self.cell_ids
    }

    pub fn cell_index(&self, cell_id: &str) -> Option<usize> {
        self.index.get(cell_id).copied()
    }

    pub fn series(&self, cell: usize) -> &CellSeries {
        &self.series[cell]
    }

    pub fn value(&self, cell: usize, day: usize, slot: usize) -> Option<u32> {
        let i = day * self.n_slots + slot;
        let s = &self.series[cell];
        s.present[i].then_some(s.values[i])
    }

    pub fn start_day(&self) -> NaiveDate {
        self.start_day
    }

    pub fn date_of_day(&self, day: usize) -> NaiveDate {
        self.start_day + chrono::Days::new(day as u64)
    }

    pub fn n_days(&self) -> usize {
        self.n_days
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn slot_width_hours(&self) -> u32 {
        self.slot_width_hours
    }
}

/// Parse an ISO-8601 hour timestamp, normalizing to UTC.
///
/// Accepts `2015-04-01T08:00Z`, `2015-04-01T08:00:00Z`, and explicit
/// offsets (`2015-04-01T10:00:00+02:00`). The instant must fall on an hour
/// boundary once in UTC.
fn parse_hour_utc(raw: &str) -> std::result::Result<(NaiveDate, u32), String> {
    let utc = if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(raw) {
        dt.to_utc()
    } else if let Ok(dt) = chrono::DateTime::parse_from_str(raw, "%Y-%m-%dT%H:%M%#z") {
        dt.to_utc()
    } else if let Some(stripped) = raw.strip_suffix('Z') {
        let naive = chrono::NaiveDateTime::parse_from_str(stripped, "%Y-%m-%dT%H:%M")
            .map_err(|e| format!("bad timestamp {raw:?}: {e}"))?;
        naive.and_utc()
    } else {
        return Err(format!("bad timestamp {raw:?}: expected ISO-8601 hour with Z or offset"));
    };
    if utc.minute() != 0 || utc.second() != 0 || utc.nanosecond() != 0 {
        return Err(format!("timestamp {raw:?} is not on an hour boundary in UTC"));
    }
    Ok((utc.date_naive(), utc.hour()))
}

/// Load `activity.csv` (`cell_id,ts,count`) and bin counts into slots.
///
/// The day axis spans the contiguous range from the earliest to the latest
/// date seen. Hours with no row are missing. With `slot_width_hours = 2`, a
/// slot is the sum of its two member hours and is missing iff either member
/// hour is missing. Duplicate `(cell_id, ts)` rows and negative counts are
/// rejected.
pub fn load_activity(path: &Path, slot_width_hours: u32) -> Result<ActivityCube> {
    if slot_width_hours != 1 && slot_width_hours != 2 {
        return Err(Error::Validation(format!(
            "slot_width_hours must be 1 or 2, got {slot_width_hours}"
        )));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| map_csv_open(path, e))?;
    expect_header(path, &mut reader, &["cell_id", "ts", "count"])?;

    // (cell -> (day, hour) -> count), dates collected for the global axis.
    let mut hourly: BTreeMap<String, HashMap<(NaiveDate, u32), u32>> = BTreeMap::new();
    let mut min_date: Option<NaiveDate> = None;
    let mut max_date: Option<NaiveDate> = None;

    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx as u64 + 2;
        let record = record.map_err(|e| Error::parse(path, line, e.to_string()))?;
        if record.len() != 3 {
            return Err(Error::parse(path, line, format!("expected 3 fields, got {}", record.len())));
        }
        let cell_id = record[0].to_string();
        if cell_id.is_empty() {
            return Err(Error::parse(path, line, "empty cell_id".to_string()));
        }
        let (date, hour) =
            parse_hour_utc(&record[1]).map_err(|msg| Error::parse(path, line, msg))?;
        let count: i64 = record[2]
            .parse()
            .map_err(|_| Error::parse(path, line, format!("count not an integer: {:?}", &record[2])))?;
        if count < 0 {
            return Err(Error::Validation(format!(
                "{}:{line}: negative count {count} for cell {cell_id} at {}",
                path.display(),
                &record[1]
            )));
        }
        let count = u32::try_from(count).map_err(|_| {
            Error::Validation(format!("{}:{line}: count {count} exceeds u32 range", path.display()))
        })?;

        min_date = Some(min_date.map_or(date, |d| d.min(date)));
        max_date = Some(max_date.map_or(date, |d| d.max(date)));
        if hourly.entry(cell_id.clone()).or_default().insert((date, hour), count).is_some() {
            return Err(Error::Ingestion(format!(
                "duplicate (cell_id, ts) row: ({cell_id}, {})",
                &record[1]
            )));
        }
    }

    let (Some(start), Some(end)) = (min_date, max_date) else {
        return Err(Error::Validation(format!("{}: no activity rows", path.display())));
    };
    let n_days = (end - start).num_days() as usize + 1;
    let n_slots = (24 / slot_width_hours) as usize;

    let mut cells = BTreeMap::new();
    for (cell_id, hours) in hourly {
        let mut values = vec![0u32; n_days * n_slots];
        let mut present = vec![false; n_days * n_slots];
        for day in 0..n_days {
            let date = start + chrono::Days::new(day as u64);
            for slot in 0..n_slots {
                let member_hours =
                    (0..slot_width_hours).map(|o| slot as u32 * slot_width_hours + o);
                let mut sum: u64 = 0;
                let mut all_present = true;
                for h in member_hours {
                    match hours.get(&(date, h)) {
                        Some(&c) => sum += u64::from(c),
                        None => {
                            all_present = false;
                            break;
                        }
                    }
                }
                if all_present {
                    let i = day * n_slots + slot;
                    values[i] = u32::try_from(sum).map_err(|_| {
                        Error::Validation(format!(
                            "cell {cell_id} {date} slot {slot}: summed count exceeds u32 range"
                        ))
                    })?;
                    present[i] = true;
                }
            }
        }
        cells.insert(cell_id, CellSeries { values, present });
    }

    ActivityCube::from_parts(cells, start, n_days, slot_width_hours)
}

/// Write the cube's canonical CSV form.
///
/// One row per member hour of every present slot: the slot's first member
/// hour carries the slot count, remaining member hours carry an explicit 0.
/// Re-ingesting with the same slot width reproduces the cube bit-exactly.
pub fn write_canonical_activity_csv<W: Write>(cube: &ActivityCube, mut out: W) -> std::io::Result<()> {
    writeln!(out, "cell_id,ts,count")?;
    let w = cube.slot_width_hours();
    for (ci, cell_id) in cube.cell_ids().iter().enumerate() {
        let series = cube.series(ci);
        for day in 0..cube.n_days() {
            let date = cube.date_of_day(day);
            for slot in 0..cube.n_slots() {
                let i = day * cube.n_slots() + slot;
                if !series.present[i] {
                    continue;
                }
                for offset in 0..w {
                    let hour = slot as u32 * w + offset;
                    let count = if offset == 0 { series.values[i] } else { 0 };
                    writeln!(
                        out,
                        "{cell_id},{:04}-{:02}-{:02}T{hour:02}:00:00Z,{count}",
                        date.year(),
                        date.month(),
                        date.day()
                    )?;
                }
            }
        }
    }
    Ok(())
}
