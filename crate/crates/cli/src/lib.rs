//! Harness around the ogstv solver: PGM image I/O, kernel and sweep
//! configuration, single restorations and experiment grids with CSV output.

pub mod config;
pub mod error;
pub mod pgm;
pub mod runner;

pub use config::{default_mu, parse_kernel, parse_sweep_config, KernelChoice, SolverOverrides, SweepConfig};
pub use error::{CliError, Result};
pub use runner::{
    run_restore, run_sweep, RestoreArgs, RestoreOutcome, ResultRow, RESULTS_CSV_HEADER,
    TRACE_CSV_HEADER,
};
