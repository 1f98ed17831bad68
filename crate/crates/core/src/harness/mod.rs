//! Experiment orchestration: config, the slot loop and trace output.

pub mod config;
pub mod emit;
pub mod run;

pub use config::{parse_seeds, Experiment, ExperimentConfig, Overrides};
pub use emit::{emit, read_csv, Format, Summary};
pub use run::{run, run_observed, run_single, RunSummary, RunTrace, SlotRecord, TraceRow};
