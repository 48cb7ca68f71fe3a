//! Command-line front end for `qcarpet`: configuration, the subcommand
//! pipelines, and all-or-nothing output.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod parse;
pub mod run;
pub mod selfcheck;

pub use config::{Command, RunConfig, Settings};
pub use error::CliError;
