//! Library half of the `jlt` binary: argument definitions, file formats and
//! command implementations. Every command is a pure function of its flags.

pub mod commands;
pub mod error;
pub mod format;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult, ExitCode};
