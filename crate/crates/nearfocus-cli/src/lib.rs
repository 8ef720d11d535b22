//! Command-line front end for the `nearfocus` library.
//!
//! The binary exposes the simulation as a handful of sweep commands that
//! write deterministic CSV/JSON artifacts. The layers are split so the
//! integration tests can drive them directly:
//!
//! - [`config`]: layered run configuration (presets < config file < flags)
//!   and its fully resolved, serializable form;
//! - [`presets`]: named scenario bundles matching the reference figures;
//! - [`output`]: artifact schemas, CSV/JSON encoding, atomic writes;
//! - [`commands`]: clap definitions and per-command execution.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

pub use commands::{run, Cli};

use thiserror::Error;

/// Top-level CLI failure. Every variant renders as a single human-readable
/// line; `main` prints it to stderr and exits nonzero.
#[derive(Debug, Error)]
pub enum CliError {
    /// A configuration file could not be parsed (`path:line: reason`).
    #[error("{0}")]
    Config(String),

    /// The merged configuration failed validation.
    #[error("{0}")]
    Validation(String),

    /// Reading or writing an artifact failed.
    #[error("{0}")]
    Io(String),

    /// The simulation library rejected the resolved inputs.
    #[error(transparent)]
    Model(#[from] nearfocus::Error),
}
