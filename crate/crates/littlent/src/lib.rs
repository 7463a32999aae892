//! Command line, file formats, reports and verification suites on top of `littlent-core`.

// `!(x > 0.0)` style checks are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod parallel;
pub mod report;
pub mod verify;

pub use error::{exit, CliError, CliResult};
