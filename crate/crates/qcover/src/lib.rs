//! Monte-Carlo experiments over quantum test-input ensembles.
//!
//! Builds on [`qcover_core`]: samples state families and circuit generators in
//! parallel (one RNG substream per sample), scores them, runs the MMD
//! randomness sweep and writes CSV, JSON and SVG output.

pub mod config;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod output;
pub mod svg;
pub mod sweep;

pub use error::{Error, Result};

/// Written into every summary file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
