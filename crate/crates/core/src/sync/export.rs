//! CSV exports for the synchronization stage.
//!
//! Values are written with Rust's shortest-round-trip float formatting, so
//! files are byte-stable across runs and thread counts. Miller–Madow can
//! leave slightly negative MI values; exports floor them at −0.01 (the raw
//! values stay available in memory on [`PairSync`]).

use std::io::Write;

use super::pairs::{ClassStats, RegionSyncSummary};

/// Report floor for bias-corrected MI values.
pub const MI_REPORT_FLOOR: f64 = -0.01;

fn clamp(v: f64) -> f64 {
    v.max(MI_REPORT_FLOOR)
}

fn clamped_stats(stats: &ClassStats) -> ClassStats {
    // Recompute mean/median from the clamped values so that the exported
    // summary stays recomputable from the exported distribution.
    ClassStats::from_values(stats.values.iter().map(|&v| clamp(v)).collect())
        .expect("non-empty by construction")
}

/// `sync.csv`: one row per region; null classes leave their fields empty
/// with n = 0.
pub fn write_sync_csv<W: Write>(summaries: &[RegionSyncSummary], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "region_id,within_mean,within_median,within_n,between_mean,between_median,between_n"
    )?;
    for s in summaries {
        let fmt = |stats: &Option<ClassStats>| match stats {
            Some(st) => {
                let st = clamped_stats(st);
                format!("{},{},{}", st.mean, st.median, st.n_pairs())
            }
            None => ",,0".to_string(),
        };
        writeln!(out, "{},{},{}", s.region_id, fmt(&s.within), fmt(&s.between))?;
    }
    Ok(())
}

/// `pairs.csv`: every evaluated pair (large; optional in the CLI).
pub fn write_pairs_csv<W: Write>(summaries: &[RegionSyncSummary], mut out: W) -> std::io::Result<()> {
    writeln!(out, "region_id,cell_i,cell_j,class,mi_avg,n_days")?;
    for s in summaries {
        for p in &s.pairs {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                s.region_id,
                p.cell_i,
                p.cell_j,
                p.class.as_str(),
                clamp(p.mi_avg),
                p.n_days_used
            )?;
        }
    }
    Ok(())
}

/// Violin-plot source data: per-region per-class pair values.
///
/// Regions are ordered by median within synchronization, descending
/// (regions without within pairs sort last, by id). A class with no pairs
/// emits a single marker row with an empty value field.
pub fn write_violin_csv<W: Write>(summaries: &[RegionSyncSummary], mut out: W) -> std::io::Result<()> {
    let mut order: Vec<usize> = (0..summaries.len()).collect();
    order.sort_by(|&a, &b| {
        let key = |i: usize| summaries[i].within.as_ref().map(|w| w.median);
        match (key(a), key(b)) {
            (Some(ma), Some(mb)) => {
                mb.total_cmp(&ma).then_with(|| summaries[a].region_id.cmp(&summaries[b].region_id))
            }
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => summaries[a].region_id.cmp(&summaries[b].region_id),
        }
    });

    writeln!(out, "region_id,class,mi_avg")?;
    for i in order {
        let s = &summaries[i];
        for (class, stats) in [("within", &s.within), ("between", &s.between)] {
            match stats {
                Some(st) => {
                    for &v in &st.values {
                        writeln!(out, "{},{},{}", s.region_id, class, clamp(v))?;
                    }
                }
                None => writeln!(out, "{},{},", s.region_id, class)?,
            }
        }
    }
    Ok(())
}
