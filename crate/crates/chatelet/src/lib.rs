//! Command-line front end and JSON formats for the `chatelet-core` decision pipeline.

pub mod cli;
pub mod input;
pub mod json;

pub use cli::{run_cli, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE};
