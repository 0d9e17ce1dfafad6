//! `cellsync sync`: activity -> z-scores -> pairwise MI -> per-region
//! within/between indices.

use cellsync_core::data::{assign_cells, load_activity, load_overlaps, load_region_map};
use cellsync_core::normalize::hourly_zscore;
use cellsync_core::sync::{
    compute_sync, write_pairs_csv, write_sync_csv, write_violin_csv, BiasCorrection, MiConfig,
    PairCap,
};
use cellsync_core::Result;

use crate::args::{BiasArg, SyncArgs};
use crate::artifacts::{create_out_dir, write_artifact, write_run_config};

use super::{emit_warnings, with_pool};

pub fn run(a: &SyncArgs) -> Result<()> {
    with_pool(a.common.threads, || {
        let cube = load_activity(&a.activity, a.slot_width_hours)?;
        let overlaps = load_overlaps(&a.overlaps)?;
        let region_map = load_region_map(&a.regions)?;
        let (assignment, warnings) = assign_cells(&overlaps, &region_map)?;
        emit_warnings(&warnings);

        let zcube = hourly_zscore(&cube)?;
        let cfg = MiConfig {
            bins: a.bins,
            bias_correction: match a.bias_correction {
                BiasArg::None => BiasCorrection::None,
                BiasArg::Mm => BiasCorrection::MillerMadow,
            },
            min_valid_slots_per_day: a.min_valid_slots,
            max_pairs_per_class: a.max_pairs.map(|limit| PairCap { limit, seed: a.seed }),
            ..MiConfig::default()
        };
        let summaries = compute_sync(&assignment, &zcube, &cfg)?;

        let dir = &a.common.out;
        create_out_dir(dir)?;
        write_artifact(dir, "sync.csv", |w| write_sync_csv(&summaries, w))?;
        if !a.no_pairs {
            write_artifact(dir, "pairs.csv", |w| write_pairs_csv(&summaries, w))?;
        }
        write_artifact(dir, "violin.csv", |w| write_violin_csv(&summaries, w))?;
        write_run_config(dir, "sync", a)?;

        let pairs: usize = summaries.iter().map(|s| s.pairs.len()).sum();
        let dropped: usize = summaries.iter().map(|s| s.diagnostics.pairs_dropped).sum();
        let missing: usize = summaries.iter().map(|s| s.diagnostics.cells_missing_series).sum();
        if missing > 0 {
            eprintln!("warning: {missing} assigned cells have no activity series");
        }
        if dropped > 0 {
            eprintln!("warning: {dropped} pairs dropped (no usable days)");
        }
        println!(
            "wrote {} ({} regions, {} pairs, {} degenerate slots)",
            dir.display(),
            summaries.len(),
            pairs,
            zcube.degenerate_slot_count()
        );
        Ok(())
    })
}
