//! File IO, external backends, report formats and the command line for
//! `inkveil-core`.

pub mod backend;
pub mod cli;
pub mod config;
pub mod io;
pub mod report;

pub use inkveil_core as core;
