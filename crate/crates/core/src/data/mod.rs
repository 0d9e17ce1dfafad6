//! Spatial grid, activity ingestion, cell assignment, and region tables.

mod activity;
mod assignment;
mod grid;
mod region_table;

pub use activity::{load_activity, write_canonical_activity_csv, ActivityCube, CellSeries};
pub use assignment::{
    assign_cells, load_overlaps, load_region_map, write_overlaps_csv, write_region_map_csv,
    Assignment, OverlapRow, RegionMapRow,
};
pub use grid::{load_cells, write_cells_csv, Cell, CellGrid};
pub use region_table::{load_columns, load_region_table, NamedColumns, RegionTable};
