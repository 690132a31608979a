//! File formats, the batch pipeline and the `rfest` command line on top of
//! `rfest-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod pipeline;

pub use error::{CliError, Result};
