//! Command-line front end: configuration, task drivers and plot scripts.

// `!(x > 0.0)` rejects NaN on purpose; index loops mirror the tensor notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod plot;
pub mod run;

pub use config::{parse_config, parse_config_str, ConfigError, RunConfig, Task};
pub use error::CliError;
