//! Library side of the `cubeprog` binary: argument definitions, command
//! execution, the embedded point table and output rendering.

pub mod commands;
pub mod render;
pub mod report;
pub mod table;

pub use commands::{execute, Cli, CliError, Command, Outcome};
