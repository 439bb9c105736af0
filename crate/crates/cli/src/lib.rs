//! Command line front end and benchmark harness: instance generation,
//! single runs of any bound, heuristic or solver, batch runs over instance
//! sets with CSV output, and performance profiles.

pub mod commands;
pub mod profile;
pub mod record;
pub mod runner;
pub mod summary;

pub use commands::CliError;
pub use record::{RunRecord, RunStatus};
pub use runner::{run_method, Method, RunOptions};
