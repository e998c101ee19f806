//! Batch front end: JSON job configs in, JSON reports out.

pub mod commands;
pub mod config;
pub mod presets;
pub mod report;

pub use commands::{analyze, check, dual, verify_pair, JobOptions, Outcome, Source};
pub use config::JobConfig;
