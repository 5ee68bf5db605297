//! Batch scoring over every (metric, model, dataset) triple.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use site_core::types::MetricId;
use site_core::{score, MetricConfig, ScoreTable};

use crate::manifest::Store;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub metric: MetricId,
    pub model: String,
    pub dataset: String,
    pub score: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreFailure {
    pub metric: MetricId,
    pub model: String,
    pub dataset: String,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreRun {
    pub records: Vec<ScoreRecord>,
    pub failures: Vec<ScoreFailure>,
}

impl ScoreRun {
    pub fn table(&self) -> ScoreTable {
        let mut t = ScoreTable::new();
        for r in &self.records {
            t.insert(r.metric, &r.model, &r.dataset, r.score)
                .expect("records hold finite, unique entries");
        }
        t
    }
}

/// Scores every feature file under every metric. Files are read once and
/// processed in parallel; a failing triple becomes a [`ScoreFailure`].
/// Output is sorted by (metric, model, dataset).
pub fn score_all(store: &Store, metrics: &[MetricConfig]) -> ScoreRun {
    let outcomes: Vec<Result<ScoreRecord, ScoreFailure>> = store
        .manifest
        .features
        .par_iter()
        .flat_map_iter(|file| {
            let loaded = store.load(file);
            metrics
                .iter()
                .map(|cfg| {
                    let fail = |error: String| ScoreFailure {
                        metric: cfg.id(),
                        model: file.model.clone(),
                        dataset: file.dataset.clone(),
                        error,
                    };
                    let (features, labels) = loaded.as_ref().map_err(|e| fail(e.to_string()))?;
                    let s = score(features, labels, cfg).map_err(|e| fail(e.to_string()))?;
                    Ok(ScoreRecord {
                        metric: cfg.id(),
                        model: file.model.clone(),
                        dataset: file.dataset.clone(),
                        score: s.value,
                        converged: s.converged(),
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut run = ScoreRun::default();
    for o in outcomes {
        match o {
            Ok(r) => run.records.push(r),
            Err(f) => run.failures.push(f),
        }
    }
    run.records
        .sort_by(|a, b| (a.metric, &a.model, &a.dataset).cmp(&(b.metric, &b.model, &b.dataset)));
    run.failures
        .sort_by(|a, b| (a.metric, &a.model, &a.dataset).cmp(&(b.metric, &b.model, &b.dataset)));
    run
}
