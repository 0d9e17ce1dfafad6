//! Spatial autocorrelation screening over region-level variables.

pub mod moran;
pub mod weights;

pub use moran::{morans_i, write_moran_csv, SpatialTestResult};
pub use weights::{build_weights, haversine_km, SpatialWeights, WeightScheme};
