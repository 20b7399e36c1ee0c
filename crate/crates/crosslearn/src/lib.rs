//! File formats, configuration, threading and the command-line driver for
//! [`crosslearn_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod io;

pub use error::{CliError, CliResult};
