//! File formats, run configuration and commands around [`semimarkov_core`].
//!
//! The binary in `main.rs` only parses arguments and maps errors to exit
//! codes; everything it prints is produced here so it can be tested
//! without spawning a process.

pub mod commands;
pub mod config;
mod error;
pub mod parallel;
pub mod table;

pub use error::CliError;
