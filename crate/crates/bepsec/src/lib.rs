//! Sweeps, CSV output and validation reports on top of `bepsec-core`.
//!
//! Every figure command reads one TOML configuration, runs its sweep with a
//! deterministic stream per sweep point, and writes a CSV whose bytes depend
//! only on the configuration (worker count excluded).

pub mod cli;
pub mod config;
pub mod figures;
pub mod report;
pub mod runner;
pub mod table;

pub use config::{Config, ConfigError};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] bepsec_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
