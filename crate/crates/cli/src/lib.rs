//! Command-line front end for the `lrb` library.

pub mod cli;
pub mod commands;
pub mod error;
pub mod input;
pub mod output;
pub mod sampling;
pub mod selftest;

pub use cli::{Cli, RunConfig};
pub use commands::{dispatch, finish, write_report};
pub use error::CliError;
pub use input::GuardConfig;
pub use output::Outcome;
