//! File formats: signal and edge-list CSV, reports, sweep tables, SVG charts
//! and run manifests.

pub mod dataset;
pub mod edges;
pub mod manifest;
pub mod report;
pub mod svg;

pub use dataset::{format_signal_csv, load_signal_matrix, parse_signal_csv, DatasetOptions};
pub use edges::{format_edge_list, load_edge_list, parse_edge_list};
pub use manifest::RunManifest;

/// Shortest representation that parses back to the same `f64`.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}
