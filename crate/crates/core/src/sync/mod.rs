//! Pairwise synchronization: daily mutual information between normalized
//! cell series, aggregated into within/between indices per region.

pub mod config;
pub mod export;
pub mod mi;
pub mod pairs;

pub use config::{BiasCorrection, Estimator, MiConfig, PairCap};
pub use export::{write_pairs_csv, write_sync_csv, write_violin_csv, MI_REPORT_FLOOR};
pub use mi::{daily_mi, equal_frequency_bins};
pub use pairs::{
    compute_sync, pair_mi, region_sync, ClassStats, PairClass, PairSync, RegionSyncSummary,
    SyncDiagnostics,
};
