//! Sweep front end for the `qdet_core` detector model: JSON configs in,
//! CSV/JSON tables out.

pub mod config;
pub mod error;
pub mod record;
pub mod sweep;

pub use config::{Format, GridValue, SweepConfig, Target};
pub use error::{CliError, Result};
pub use record::{Cell, Dataset};
pub use sweep::{
    run, run_contrast_map, run_gain_vs_m, run_snr_table, run_verify, Outcome, RunOptions,
    VerifyReport,
};
