//! CSV pipelines, Monte Carlo experiments and SVG figures on top of
//! [`tcct_core`].
//!
//! The `tcct` binary is a thin wrapper around [`cli::run`]. Exit codes are
//! `0` on success, `2` for usage or configuration problems (including a
//! missing column or unreadable input), `3` for bad values inside the data,
//! and `1` when output cannot be written.

pub mod cli;
pub mod error;
pub mod parallel;
pub mod pipeline;
pub mod report;
pub mod simulate;
pub mod svg;
pub mod table;

pub use error::{CliError, Result};
