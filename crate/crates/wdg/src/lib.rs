//! File formats, parallel experiment runners and the `wdg` command-line
//! tool on top of `wdg-core`.

pub mod cli;
pub mod error;
pub mod formats;
pub mod runner;

pub use error::{CliError, CliResult};
