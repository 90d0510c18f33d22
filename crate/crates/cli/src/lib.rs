//! Experiment runner for the `bsrmg` solver: LFA factors, measured
//! convergence factors and iteration counts as CSV or JSON rows.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod error;
pub mod experiments;
pub mod pool;
pub mod reproduce;
pub mod rows;

pub use args::{run, Cli};
pub use error::{CliError, Result};
