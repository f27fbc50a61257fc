//! Projection files and the on-disk run store.

mod projections;
mod store;

pub use projections::{load_projections, read_projections, save_projections, write_projections};
pub use store::{report_csv, RunManifest, RunStore, MANIFEST_SCHEMA_VERSION};
