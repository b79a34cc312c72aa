//! Experiment drivers behind the `uavcps` binary.
//!
//! Each driver takes a fully resolved [`Config`], returns its rows in input
//! order, and knows how to write them as CSV plus a short text summary.

mod config;
mod dcf_run;
mod orient_run;
mod sweep;

pub use config::{apply_override, Config, DcfSweep, OrientSettings, SweepSpec};
pub use dcf_run::{dcf_summary, run_dcf, write_dcf_csv, DcfRow, RowKind};
pub use orient_run::{run_orient, write_orient_csv, OrientReport};
pub use sweep::{run_sweep, write_sweep_csv, MethodOutcome, SweepResult, SweepRow};
