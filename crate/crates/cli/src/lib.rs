//! File formats and subcommands behind the `mixsolve` binary.

pub mod commands;
pub mod error;
pub mod format;

pub use commands::Exit;
pub use error::CliError;
