//! Command-line driver for the `ballnls-core` experiments.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod report;
