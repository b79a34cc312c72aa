//! Energy planning for a two-UAV compute-fly-transmit link.
//!
//! The sender first spends CPU time removing redundant bits and tuning its
//! waveform, then flies a straight leg at the maximum-range speed, then
//! hovers and transmits. [`planner`] jointly picks the computation times,
//! flight duration, heading and transmit power that minimise total energy
//! under a delay budget, and also runs the communication-and-control-only
//! baseline that skips the computation phase.
//!
//! Alongside the planner the crate carries a saturation-throughput model of
//! 802.11 DCF basic access ([`dcf`]) and a rule-based cause classifier for
//! degraded links ([`orient`]). [`harness`] wires all of it to JSON configs
//! and CSV output for the `uavcps` binary.


// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod channel;
pub mod computation;
pub mod dcf;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod harness;
pub mod link;
pub mod orient;
pub mod planner;
pub mod propulsion;
pub mod search;

pub use error::{Error, Result};
pub use exec::Execution;
