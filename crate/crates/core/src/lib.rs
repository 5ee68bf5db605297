//! Source-independent transferability estimation: the six feature-based
//! scores, rank statistics used to evaluate them, and the benchmark
//! diagnostics (static ranker, ablation sweeps, score-gap fidelity,
//! rank dispersion and checklist audit).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, manifests
//! and the command line live in the `site-bench` companion crate.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod diagnostics;
mod error;
pub mod linalg;
pub mod metrics;
pub mod rank;
pub mod summary;
pub mod types;

pub use error::{Error, Result};
pub use metrics::{score, MetricConfig, MetricScore};
pub use rank::{
    kendall_tau, pearson, rank_desc, weighted_kendall_tau, RankAssignment, RankedScores,
};
pub use types::{
    AccuracyTable, BenchmarkManifest, DatasetRecord, FeatureFile, FeatureMatrix, LabelVector,
    MetricId, ModelRecord, ScoreTable,
};
