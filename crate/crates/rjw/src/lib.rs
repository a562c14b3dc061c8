//! Command-line front end, file formats and fixtures for `rjw-core`.

pub mod cli;
pub mod config;
pub mod emit;
pub mod fixtures;
pub mod suites;
