//! Per-slot z-scoring across days, removing the circadian trend.
//!
//! Raw counts follow a strong daily rhythm; comparing them directly would
//! make every pair of cells look synchronized. Standardizing each slot of
//! the day across days (`z = (x − μ_h)/σ_h`) removes that shared profile so
//! that the pairwise statistics measure co-deviation, not the clock.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;

use crate::data::ActivityCube;
use crate::error::{Error, Result};

/// One cell's normalized series plus the per-slot statistics behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct CellZScores {
    /// Day-major, index `day * n_slots + slot`; 0.0 in degenerate slots.
    pub z: Vec<f64>,
    /// Same mask as the source cube: missing stays missing.
    pub present: Vec<bool>,
    /// Per-slot mean over non-missing days (length `n_slots`).
    pub mu: Vec<f64>,
    /// Per-slot population standard deviation (length `n_slots`).
    pub sigma: Vec<f64>,
    /// Slot had σ = 0 or fewer than 2 non-missing days.
    pub degenerate: Vec<bool>,
}

/// Normalized series for all cells, same shape and cell order as the
/// source [`ActivityCube`].
#[derive(Debug, Clone)]
pub struct ZScoreCube {
    cell_ids: Vec<String>,
    index: HashMap<String, usize>,
    cells: Vec<CellZScores>,
    n_days: usize,
    n_slots: usize,
    slot_width_hours: u32,
}

impl ZScoreCube {
    pub fn cell_ids(&self) -> &[String] {
        &self.cell_ids
    }

    pub fn cell_index(&self, cell_id: &str) -> Option<usize> {
        self.index.get(cell_id).copied()
    }

    pub fn cell(&self, i: usize) -> &CellZScores {
        &self.cells[i]
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

    /// Number of non-missing slots for `cell` on `day`.
    pub fn valid_slots(&self, cell: usize, day: usize) -> usize {
        let s = &self.cells[cell];
        (0..self.n_slots).filter(|&h| s.present[day * self.n_slots + h]).count()
    }

    /// Total degenerate (cell, slot) combinations, for diagnostics.
    pub fn degenerate_slot_count(&self) -> usize {
        self.cells.iter().map(|c| c.degenerate.iter().filter(|&&d| d).count()).sum()
    }
}

fn zscore_one_cell(values: &[u32], present: &[bool], n_days: usize, n_slots: usize) -> CellZScores {
    let mut z = vec![0.0; n_days * n_slots];
    let mut mu = vec![0.0; n_slots];
    let mut sigma = vec![0.0; n_slots];
    let mut degenerate = vec![false; n_slots];

    for h in 0..n_slots {
        let days: Vec<f64> = (0..n_days)
            .filter(|&d| present[d * n_slots + h])
            .map(|d| f64::from(values[d * n_slots + h]))
            .collect();
        if days.len() < 2 {
            degenerate[h] = true;
            mu[h] = days.first().copied().unwrap_or(0.0);
            continue;
        }
        let n = days.len() as f64;
        let mean = days.iter().sum::<f64>() / n;
        let var = days.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let sd = var.sqrt();
        mu[h] = mean;
        sigma[h] = sd;
        if sd == 0.0 {
            degenerate[h] = true;
            continue;
        }
        for d in 0..n_days {
            let i = d * n_slots + h;
            if present[i] {
                z[i] = (f64::from(values[i]) - mean) / sd;
            }
        }
    }

    CellZScores { z, present: present.to_vec(), mu, sigma, degenerate }
}

/// Z-score every cell's series per slot of the day, across days.
///
/// Statistics use the population (divide-by-N) standard deviation over the
/// days where the slot is non-missing. Slots with σ = 0 or fewer than two
/// observations are flagged degenerate and emit z = 0 instead of failing,
/// preserving pair coverage.
pub fn hourly_zscore(cube: &ActivityCube) -> Result<ZScoreCube> {
    if cube.n_days() < 2 {
        return Err(Error::Validation(format!(
            "z-scoring needs at least 2 days, cube has {}",
            cube.n_days()
        )));
    }
    let n_days = cube.n_days();
    let n_slots = cube.n_slots();
    let cells: Vec<CellZScores> = (0..cube.cell_ids().len())
        .into_par_iter()
        .map(|ci| {
            let s = cube.series(ci);
            zscore_one_cell(&s.values, &s.present, n_days, n_slots)
        })
        .collect();
    let cell_ids = cube.cell_ids().to_vec();
    let index = cell_ids.iter().cloned().enumerate().map(|(i, id)| (id, i)).collect();
    Ok(ZScoreCube {
        cell_ids,
        index,
        cells,
        n_days,
        n_slots,
        slot_width_hours: cube.slot_width_hours(),
    })
}

/// Debug export: `cell_id,day,slot,z`, one row per non-missing entry.
pub fn write_zscores_csv<W: Write>(cube: &ZScoreCube, mut out: W) -> std::io::Result<()> {
    writeln!(out, "cell_id,day,slot,z")?;
    for (ci, cell_id) in cube.cell_ids().iter().enumerate() {
        let c = cube.cell(ci);
        for day in 0..cube.n_days() {
            for slot in 0..cube.n_slots() {
                let i = day * cube.n_slots() + slot;
                if c.present[i] {
                    writeln!(out, "{cell_id},{day},{slot},{}", c.z[i])?;
                }
            }
        }
    }
    Ok(())
}
