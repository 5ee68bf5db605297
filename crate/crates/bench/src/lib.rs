//! Storage, batch scoring and reporting around `site-core`.
//!
//! Feature matrices live in SITB files (see [`sitb`]), one per
//! (model, dataset) pair, registered in a JSON manifest together with
//! model metadata and fine-tuned accuracies. The `site` binary drives
//! validation, scoring and the diagnostics reports from a run config.

pub mod cli;
pub mod config;
mod error;
pub mod fsio;
pub mod manifest;
pub mod pipeline;
pub mod report;
pub mod scoring;
pub mod sitb;
pub mod store;

pub use error::{Error, Issue, Result};
pub use manifest::{load_manifest, read_manifest, write_manifest, Store};
pub use store::{read_features, write_features};
