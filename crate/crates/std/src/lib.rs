//! # renyi-converse-std
//!
//! Command-line frontend for `renyi-converse-core`: JSON state files,
//! range-syntax parameter sweeps, CSV/JSON export and order-preserving
//! parallel evaluation.

pub mod cli;
mod commands;
pub mod error;
pub mod format;
pub mod grid;
pub mod output;
pub mod parallel;

pub use error::CliError;
