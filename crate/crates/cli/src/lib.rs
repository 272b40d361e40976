//! Document formats, subcommand implementations and the demo table behind
//! the `blockcoh` binary.

pub mod commands;
pub mod demo;
pub mod doc;
pub mod error;
pub mod report;

pub use error::CliError;
pub use report::Report;
