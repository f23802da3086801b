//! File formats, run configuration, and the command-line front end for the
//! projection-encoder toolkit. The numeric core lives in `unig-core`; this
//! crate adds everything that needs the standard library: dataset JSON
//! loading and canonical saving, seeded split and sweep orchestration, and
//! machine-readable reports.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod schema;

pub use cli::run_cli;
pub use error::CliError;
