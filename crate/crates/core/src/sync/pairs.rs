//! All-pairs MI aggregation into per-region within/between summaries.
//!
//! This is the hot path: a region with C cells has C(C−1)/2 pairs, each
//! scored over up to N days. Bin assignments for complete days are
//! precomputed once per cell so the per-pair inner loop only counts the
//! joint histogram. Pairs are evaluated in parallel but collected in
//! enumeration order and reduced sequentially, so results are bit-stable
//! across thread counts.

use rand::seq::index::sample;
use rayon::prelude::*;

use crate::data::Assignment;
use crate::error::{Error, Result};
use crate::normalize::{CellZScores, ZScoreCube};
use crate::rng::keyed_rng;

use super::config::MiConfig;
use super::mi::{equal_frequency_bins, mi_from_assignments};

/// Whether a pair joins cells of one municipality or bridges two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    Within,
    Between,
}

impl PairClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PairClass::Within => "within",
            PairClass::Between => "between",
        }
    }
}

/// Average daily MI for one unordered cell pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSync {
    /// Lexicographically smaller cell id.
    pub cell_i: String,
    pub cell_j: String,
    pub class: PairClass,
    /// Raw average (no report clamp applied).
    pub mi_avg: f64,
    pub n_days_used: usize,
}

/// Per-class distribution of pair values, in pair enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub values: Vec<f64>,
    pub mean: f64,
    pub median: f64,
}

impl ClassStats {
    pub fn from_values(values: Vec<f64>) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mean = pairwise_sum(&values) / values.len() as f64;
        let median = median(&values);
        Some(ClassStats { values, mean, median })
    }

    pub fn n_pairs(&self) -> usize {
        self.values.len()
    }
}

/// Counts of inputs the pair stage had to leave out.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SyncDiagnostics {
    /// Pairs with zero usable days.
    pub pairs_dropped: usize,
    /// Cells assigned to the region but absent from the activity data.
    pub cells_missing_series: usize,
}

/// Within/between synchronization for one region.
#[derive(Debug, Clone)]
pub struct RegionSyncSummary {
    pub region_id: String,
    /// `None` when the region yields no pairs of the class.
    pub within: Option<ClassStats>,
    pub between: Option<ClassStats>,
    /// Every evaluated pair that had at least one usable day.
    pub pairs: Vec<PairSync>,
    pub diagnostics: SyncDiagnostics,
}

/// Deterministic pairwise (cascade) summation over a fixed index order.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Precomputed per-day bin assignments for one cell; `None` for days where
/// the cell is missing any slot.
struct CellDayBins {
    days: Vec<Option<Vec<u16>>>,
}

fn precompute_day_bins(cell: &CellZScores, n_days: usize, n_slots: usize, bins: usize) -> CellDayBins {
    let days = (0..n_days)
        .map(|d| {
            let range = d * n_slots..(d + 1) * n_slots;
            if cell.present[range.clone()].iter().all(|&p| p) {
                Some(equal_frequency_bins(&cell.z[range], bins))
            } else {
                None
            }
        })
        .collect();
    CellDayBins { days }
}

/// Average daily MI over usable days for one pair of normalized series.
///
/// A day is usable when the pairwise-complete slot count reaches the
/// configured minimum (all slots by default) and the bin count. Returns
/// `None` when no day qualifies.
pub fn pair_mi(
    zi: &CellZScores,
    zj: &CellZScores,
    n_slots: usize,
    cfg: &MiConfig,
) -> Option<(f64, usize)> {
    let n_days = zi.z.len() / n_slots;
    let required = cfg.required_slots(n_slots).max(cfg.bins);
    let mut daily = Vec::new();
    let mut xs = Vec::with_capacity(n_slots);
    let mut ys = Vec::with_capacity(n_slots);
    for d in 0..n_days {
        xs.clear();
        ys.clear();
        for h in 0..n_slots {
            let idx = d * n_slots + h;
            if zi.present[idx] && zj.present[idx] {
                xs.push(zi.z[idx]);
                ys.push(zj.z[idx]);
            }
        }
        if xs.len() < required {
            continue;
        }
        let bx = equal_frequency_bins(&xs, cfg.bins);
        let by = equal_frequency_bins(&ys, cfg.bins);
        daily.push(mi_from_assignments(&bx, &by, cfg.bins, cfg.bias_correction));
    }
    if daily.is_empty() {
        None
    } else {
        Some((pairwise_sum(&daily) / daily.len() as f64, daily.len()))
    }
}

/// `pair_mi` specialized to precomputed complete-day bins (bit-identical
/// to the general path on the days it accepts).
fn pair_mi_precomputed(
    bi: &CellDayBins,
    bj: &CellDayBins,
    zi: &CellZScores,
    zj: &CellZScores,
    n_slots: usize,
    cfg: &MiConfig,
) -> Option<(f64, usize)> {
    let required = cfg.required_slots(n_slots).max(cfg.bins);
    let allow_partial_days = required < n_slots;
    let n_days = bi.days.len();
    let mut daily = Vec::new();
    let mut xs = Vec::with_capacity(n_slots);
    let mut ys = Vec::with_capacity(n_slots);
    for d in 0..n_days {
        match (&bi.days[d], &bj.days[d]) {
            (Some(bx), Some(by)) => {
                daily.push(mi_from_assignments(bx, by, cfg.bins, cfg.bias_correction));
            }
            _ if allow_partial_days => {
                xs.clear();
                ys.clear();
                for h in 0..n_slots {
                    let idx = d * n_slots + h;
                    if zi.present[idx] && zj.present[idx] {
                        xs.push(zi.z[idx]);
                        ys.push(zj.z[idx]);
                    }
                }
                if xs.len() < required {
                    continue;
                }
                let bx = equal_frequency_bins(&xs, cfg.bins);
                let by = equal_frequency_bins(&ys, cfg.bins);
                daily.push(mi_from_assignments(&bx, &by, cfg.bins, cfg.bias_correction));
            }
            _ => {}
        }
    }
    if daily.is_empty() {
        None
    } else {
        Some((pairwise_sum(&daily) / daily.len() as f64, daily.len()))
    }
}

/// Subsample pair indices uniformly without replacement, keyed so the
/// choice depends only on (seed, region, class), never on thread count.
fn subsample_indices(
    n: usize,
    limit: usize,
    seed: u64,
    region_id: &str,
    class: PairClass,
) -> Vec<usize> {
    if n <= limit {
        return (0..n).collect();
    }
    let mut rng = keyed_rng(
        seed,
        &format!("pair-subsample/{region_id}/{}", class.as_str()),
        &[],
    );
    let mut chosen: Vec<usize> = sample(&mut rng, n, limit).into_iter().collect();
    chosen.sort_unstable();
    chosen
}

/// Compute within/between synchronization for one region.
///
/// Within pairs join two cells of the same municipality; between pairs
/// join cells of different municipalities of the region. Means and medians
/// are unweighted over pairs (pooled, not per-municipality).
pub fn region_sync(
    region_id: &str,
    assignment: &Assignment,
    zcube: &ZScoreCube,
    cfg: &MiConfig,
) -> Result<RegionSyncSummary> {
    cfg.validate(zcube.n_slots())?;
    let mut diagnostics = SyncDiagnostics::default();

    // Region cells present in the cube, sorted by id (assignment iterates
    // in sorted order already), with their municipalities.
    let mut cells: Vec<(usize, &str, &str)> = Vec::new();
    for cell_id in assignment.cells_of_region(region_id) {
        match zcube.cell_index(cell_id) {
            Some(i) => {
                let muni = assignment.municipality_of(cell_id).expect("cell came from assignment");
                cells.push((i, cell_id, muni));
            }
            None => diagnostics.cells_missing_series += 1,
        }
    }

    // Enumerate unordered pairs in sorted-id order and classify.
    let mut within_pairs: Vec<(usize, usize)> = Vec::new();
    let mut between_pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..cells.len() {
        for b in (a + 1)..cells.len() {
            if cells[a].2 == cells[b].2 {
                within_pairs.push((a, b));
            } else {
                between_pairs.push((a, b));
            }
        }
    }

    if let Some(cap) = cfg.max_pairs_per_class {
        let keep =
            subsample_indices(within_pairs.len(), cap.limit, cap.seed, region_id, PairClass::Within);
        within_pairs = keep.into_iter().map(|i| within_pairs[i]).collect();
        let keep = subsample_indices(
            between_pairs.len(),
            cap.limit,
            cap.seed,
            region_id,
            PairClass::Between,
        );
        between_pairs = keep.into_iter().map(|i| between_pairs[i]).collect();
    }

    let bins_by_cell: Vec<CellDayBins> = cells
        .par_iter()
        .map(|&(zi, _, _)| {
            precompute_day_bins(zcube.cell(zi), zcube.n_days(), zcube.n_slots(), cfg.bins)
        })
        .collect();

    let mut tagged: Vec<((usize, usize), PairClass)> = Vec::new();
    tagged.extend(within_pairs.iter().map(|&p| (p, PairClass::Within)));
    tagged.extend(between_pairs.iter().map(|&p| (p, PairClass::Between)));

    let results: Vec<Option<(f64, usize)>> = tagged
        .par_iter()
        .map(|&((a, b), _)| {
            pair_mi_precomputed(
                &bins_by_cell[a],
                &bins_by_cell[b],
                zcube.cell(cells[a].0),
                zcube.cell(cells[b].0),
                zcube.n_slots(),
                cfg,
            )
        })
        .collect();

    let mut pairs = Vec::new();
    let mut within_values = Vec::new();
    let mut between_values = Vec::new();
    for (((a, b), class), result) in tagged.into_iter().zip(results) {
        match result {
            Some((mi_avg, n_days_used)) => {
                match class {
                    PairClass::Within => within_values.push(mi_avg),
                    PairClass::Between => between_values.push(mi_avg),
                }
                pairs.push(PairSync {
                    cell_i: cells[a].1.to_string(),
                    cell_j: cells[b].1.to_string(),
                    class,
                    mi_avg,
                    n_days_used,
                });
            }
            None => diagnostics.pairs_dropped += 1,
        }
    }

    Ok(RegionSyncSummary {
        region_id: region_id.to_string(),
        within: ClassStats::from_values(within_values),
        between: ClassStats::from_values(between_values),
        pairs,
        diagnostics,
    })
}

/// Run [`region_sync`] for every region in the assignment, sorted by id.
pub fn compute_sync(
    assignment: &Assignment,
    zcube: &ZScoreCube,
    cfg: &MiConfig,
) -> Result<Vec<RegionSyncSummary>> {
    cfg.validate(zcube.n_slots())?;
    if assignment.is_empty() {
        return Err(Error::Validation("assignment maps no cells".into()));
    }
    assignment
        .region_ids()
        .iter()
        .map(|r| region_sync(r, assignment, zcube, cfg))
        .collect()
}
