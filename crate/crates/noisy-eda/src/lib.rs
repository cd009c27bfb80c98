//! Experiment harness, configuration, reports and CLI for the compact GA
//! variants in `noisy-eda-core`.
//!
//! The split of responsibilities:
//!
//! - [`harness`]: seeded parallel trials and summary statistics;
//! - [`config`]: TOML / flag configuration with `k` expressions like "5d";
//! - [`csvio`], [`plot`], [`manifest`]: the report files a run writes;
//! - [`cli`]: the `noisy-eda` binary's `run`, `reproduce` and `plot`
//!   subcommands.

pub mod cli;
pub mod config;
pub mod csvio;
mod error;
pub mod harness;
pub mod manifest;
pub mod plot;

pub use error::{Error, Result};
