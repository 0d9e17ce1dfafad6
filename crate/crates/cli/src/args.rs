//! Command-line surface.
//!
//! Every subcommand takes `--out`; the fully resolved arguments are written
//! there as `run_config_<command>.json` so any output directory documents
//! how to reproduce itself.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "cellsync",
    version,
    about = "Synchronization indices, spatial screening, and variable-importance regression for cell-level activity data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset (or synthetic targets from a sync run)
    Synth(SynthArgs),
    /// Compute within/between synchronization indices per region
    Sync(SyncArgs),
    /// Screen region-level variables for spatial autocorrelation (Moran's I)
    Screen(ScreenArgs),
    /// Fit OLS per target with the full variable-importance suite
    Regress(RegressArgs),
    /// Bundle all stage outputs and configs into one report.json
    Report(ReportArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CommonArgs {
    /// Output directory (created if missing)
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (defaults to all cores; results do not depend on it)
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BiasArg {
    /// Raw plug-in estimator
    None,
    /// Miller–Madow bias correction
    Mm,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightsArg {
    /// Inverse haversine distance, row-standardized
    Invdist,
    /// k-nearest neighbours (ties at the k-th distance included)
    Knn,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    /// Region template `munis:cells:alpha:gamma`, repeat once per region
    #[arg(long, value_name = "M:C:A:G", required_unless_present = "from_sync")]
    pub region_spec: Vec<String>,
    /// Days of activity to generate
    #[arg(long, default_value_t = 30)]
    pub days: usize,
    /// Slot width in hours (1 => 24 slots/day, 2 => 12)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
    #[arg(default_value_t = 1)]
    pub slot_width_hours: u32,
    /// Standard deviation of the idiosyncratic log-activity noise
    #[arg(long, default_value_t = 1.0)]
    pub noise_sd: f64,
    /// Comma-separated per-slot profile (defaults to a circadian curve)
    #[arg(long)]
    pub profile: Option<String>,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Build targets.csv from an existing sync.csv instead of a dataset
    #[arg(long, value_name = "SYNC_CSV")]
    pub from_sync: Option<PathBuf>,
    /// Covariate table feeding the target construction (targets mode)
    #[arg(long, requires = "from_sync")]
    pub covariates: Option<PathBuf>,
    /// Covariate column to use (defaults to the only column)
    #[arg(long, requires = "covariates")]
    pub covariate_name: Option<String>,
    /// Name of the emitted target column (targets mode)
    #[arg(long, default_value = "target")]
    pub target_name: String,
    /// Weight on the within index (targets mode)
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub w_within: f64,
    /// Weight on the between index (targets mode)
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub w_between: f64,
    /// Weight on the covariate (targets mode)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub w_covariate: f64,
    /// Noise sd added to the constructed target (targets mode)
    #[arg(long, default_value_t = 0.0)]
    pub target_noise_sd: f64,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SyncArgs {
    /// Activity table `cell_id,ts,count`
    #[arg(long)]
    pub activity: PathBuf,
    /// Overlap table `cell_id,municipality_id,overlap_km2`
    #[arg(long)]
    pub overlaps: PathBuf,
    /// Municipality-to-region map `municipality_id,region_id`
    #[arg(long)]
    pub regions: PathBuf,
    /// Slot width in hours (1 => 24 slots/day, 2 => 12)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
    #[arg(default_value_t = 1)]
    pub slot_width_hours: u32,
    /// Equal-frequency bins per variable
    #[arg(long, default_value_t = 4)]
    pub bins: usize,
    /// Entropy bias correction
    #[arg(long, value_enum, default_value_t = BiasArg::Mm)]
    pub bias_correction: BiasArg,
    /// Minimum pairwise-valid slots for a day to count (default: all slots)
    #[arg(long)]
    pub min_valid_slots: Option<usize>,
    /// Cap on evaluated pairs per (region, class); excess is subsampled
    #[arg(long)]
    pub max_pairs: Option<usize>,
    /// Seed for pair subsampling
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip the potentially large pairs.csv
    #[arg(long, default_value_t = false)]
    pub no_pairs: bool,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ScreenArgs {
    /// sync.csv from a previous `cellsync sync` run
    #[arg(long)]
    pub sync: PathBuf,
    /// Cell table `cell_id,centroid_lon,centroid_lat,area_km2`
    #[arg(long)]
    pub cells: PathBuf,
    /// Overlap table `cell_id,municipality_id,overlap_km2`
    #[arg(long)]
    pub overlaps: PathBuf,
    /// Municipality-to-region map `municipality_id,region_id`
    #[arg(long)]
    pub regions: PathBuf,
    /// Additional region-level columns to screen
    #[arg(long)]
    pub covariates: Option<PathBuf>,
    /// Target columns to screen
    #[arg(long)]
    pub targets: Option<PathBuf>,
    /// Spatial weight scheme
    #[arg(long, value_enum, default_value_t = WeightsArg::Invdist)]
    pub weights: WeightsArg,
    /// Neighbour count for `--weights knn`
    #[arg(long, default_value_t = 4)]
    pub knn_k: usize,
    /// Permutations for the Moran's I test
    #[arg(long, default_value_t = 999)]
    pub permutations: usize,
    /// Seed for the permutation test
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct RegressArgs {
    /// sync.csv from a previous `cellsync sync` run
    #[arg(long)]
    pub sync: PathBuf,
    /// Region-level covariate columns added to every design
    #[arg(long)]
    pub covariates: Option<PathBuf>,
    /// Region-level target columns, one OLS fit each
    #[arg(long)]
    pub targets: PathBuf,

    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
}
