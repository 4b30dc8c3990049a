//! Seeded experiment runners.
//!
//! Every experiment is a pure function of its [`ExperimentConfig`]: identical
//! configurations produce byte-identical CSV and JSON output. Graph seeds
//! depend only on the network parameters and realization index, so cells
//! that differ only in hub count route on the same graphs.

mod config;
mod network;
mod output;
mod runner;

pub use config::{ExperimentConfig, ExperimentId, Family, HubScalePolicy, OutputFormat, PairPolicy};
pub use network::{load_giant, NetworkSpec, Realization};
pub use output::{csv_rows, write_output};
pub use runner::{
    run, run_label_dist, run_real_graph, run_stretch_cdf, run_stretch_vs_gamma, run_stretch_vs_n,
    CellResult, ExperimentOutput, ExperimentResults, HistogramRow, LabelDistResult, LabelRealization,
    MeanSe, RealGraphResult, RealizationResult,
};
