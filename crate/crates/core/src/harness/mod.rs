//! Experiment driver: code/decoder registry, Monte Carlo sweeps, datasets,
//! offline evaluation and code reports.

mod dataset;
mod eval;
mod info;
mod registry;
pub mod stats;
mod sweep;

pub use dataset::{generate_dataset, read_dataset, DatasetHeader, DatasetRecord, PSource, DATASET_FORMAT};
pub use eval::{evaluate_predictions, EvalReport};
pub use info::{code_info, CodeInfo};
pub use registry::{CodeBundle, CodeId, DecoderId};
pub use sweep::{
    run_sweep, run_sweep_with, thread_pool, write_sweep_csv, PointResult, SweepConfig, SweepResult, Tally, CSV_HEADER,
};
