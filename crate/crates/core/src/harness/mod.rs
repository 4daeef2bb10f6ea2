//! Configuration, output files and the canned experiments behind the CLI.

mod config;
mod experiments;
pub mod output;

pub use config::{random_analytic_coefficients, Mode, Preset, SimConfig, RANDOM_ANALYTIC_KMAX, SCHEMA_VERSION};
pub use experiments::{
    experiment_convergence, experiment_decay_fit, experiment_kernel_check, experiment_reversal, kernel_check_grid, run,
    ExperimentResult, Relation, RunSummary,
};
