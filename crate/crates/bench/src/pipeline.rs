//! Report assembly shared by the subcommands.

use std::collections::BTreeSet;

use site_core::diagnostics::{
    ablation_sweep, audit_benchmark, evaluate_metric, fidelity_correlation, static_score_table,
    AblationPlan, AuditReport, AuditThresholds, StaticOrder,
};
use site_core::summary::SummaryTable;
use site_core::types::MetricId;
use site_core::{AccuracyTable, BenchmarkManifest, ScoreTable};

use crate::error::{Error, Issue, Result};
use crate::report::{
    fmt_rounded, scatter_file_name, AblationRow, FidelityRow, ScatterRow, StaticScoreRow,
    StaticTauRow,
};

/// Every (metric, model, dataset) needed by an evaluation must be present.
pub fn require_complete(
    scores: &ScoreTable,
    acc: &AccuracyTable,
    metrics: &[MetricId],
    models: &[String],
    datasets: &[String],
) -> Result<()> {
    let mut issues = Vec::new();
    for d in datasets {
        for m in models {
            if let Err(e) = acc.get(m, d) {
                issues.push(Issue::new(e.code(), None, e.to_string()));
            }
            for &metric in metrics {
                if let Err(e) = scores.get(metric, m, d) {
                    issues.push(Issue::new(e.code(), None, format!("{metric}: {e}")));
                }
            }
        }
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(issues))
    }
}

/// Metrics present in the table, in canonical order, without the static ranker.
pub fn scored_metrics(scores: &ScoreTable) -> Vec<MetricId> {
    let present: BTreeSet<MetricId> = scores.metrics();
    present
        .into_iter()
        .filter(|&m| m != MetricId::Static)
        .collect()
}

/// `scores` plus the static ranker over the manifest's pool.
pub fn with_static(
    scores: &ScoreTable,
    manifest: &BenchmarkManifest,
    order: &StaticOrder,
) -> Result<ScoreTable> {
    let mut merged = static_score_table(order, &manifest.model_ids(), &manifest.dataset_ids())?;
    for (metric, model, dataset, value) in scores.iter().filter(|e| e.0 != MetricId::Static) {
        merged.insert(metric, model, dataset, value)?;
    }
    Ok(merged)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticReport {
    pub scores: Vec<StaticScoreRow>,
    pub tau: Vec<StaticTauRow>,
}

pub fn static_report(manifest: &BenchmarkManifest, order: &StaticOrder) -> Result<StaticReport> {
    let models = manifest.model_ids();
    let datasets = manifest.dataset_ids();
    let table = static_score_table(order, &models, &datasets)?;
    require_complete(
        &table,
        &manifest.accuracies,
        &[MetricId::Static],
        &models,
        &datasets,
    )?;
    let scores = models
        .iter()
        .map(|m| {
            Ok(StaticScoreRow {
                model: m.clone(),
                score: table.get(MetricId::Static, m, &datasets[0])?,
            })
        })
        .collect::<site_core::Result<Vec<_>>>()?;
    let tau = datasets
        .iter()
        .map(|d| {
            Ok(StaticTauRow {
                dataset: d.clone(),
                tau_w: fmt_rounded(evaluate_metric(
                    &table,
                    &manifest.accuracies,
                    MetricId::Static,
                    d,
                    &models,
                )?),
            })
        })
        .collect::<site_core::Result<Vec<_>>>()?;
    Ok(StaticReport { scores, tau })
}

pub fn ablation_rows(
    scores: &ScoreTable,
    manifest: &BenchmarkManifest,
    metrics: &[MetricId],
    plan: &AblationPlan,
) -> Result<Vec<AblationRow>> {
    let models = manifest.model_ids();
    let mut rows = Vec::new();
    for &metric in metrics {
        for d in manifest.dataset_ids() {
            for point in ablation_sweep(scores, &manifest.accuracies, metric, &d, &models, plan)? {
                rows.push(AblationRow {
                    metric,
                    dataset: d.clone(),
                    removed_prefix: point.removed.join("|"),
                    tau_w: fmt_rounded(point.tau_w),
                });
            }
        }
    }
    Ok(rows)
}

pub fn fidelity_rows(
    scores: &ScoreTable,
    manifest: &BenchmarkManifest,
    metrics: &[MetricId],
) -> Result<Vec<FidelityRow>> {
    let models = manifest.model_ids();
    let mut rows = Vec::new();
    for &metric in metrics {
        for d in manifest.dataset_ids() {
            let rec = fidelity_correlation(scores, &manifest.accuracies, metric, &d, &models)?;
            rows.push(FidelityRow {
                metric,
                dataset: d,
                pearson_r: rec.pearson_r.map(fmt_rounded).unwrap_or_default(),
                pair_count: rec.pair_count,
            });
        }
    }
    Ok(rows)
}

pub fn scatter_rows(
    scores: &ScoreTable,
    manifest: &BenchmarkManifest,
    metrics: &[MetricId],
) -> Result<Vec<(String, Vec<ScatterRow>)>> {
    let mut out = Vec::new();
    for &metric in metrics {
        for d in manifest.dataset_ids() {
            let rows = manifest
                .model_ids()
                .into_iter()
                .map(|m| {
                    Ok(ScatterRow {
                        score: scores.get(metric, &m, &d)?,
                        accuracy: manifest.accuracies.get(&m, &d)?,
                        model: m,
                    })
                })
                .collect::<site_core::Result<Vec<_>>>()?;
            out.push((scatter_file_name(metric, &d), rows));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub summary: SummaryTable,
    pub ablation: Vec<AblationRow>,
    pub fidelity: Vec<FidelityRow>,
    pub scatter: Vec<(String, Vec<ScatterRow>)>,
}

/// Summary, ablation, fidelity and scatter data for every scored metric plus the static ranker.
pub fn evaluate(
    scores: &ScoreTable,
    manifest: &BenchmarkManifest,
    order: &StaticOrder,
    plan: &AblationPlan,
) -> Result<Evaluation> {
    let models = manifest.model_ids();
    let datasets = manifest.dataset_ids();
    let mut metrics = scored_metrics(scores);
    require_complete(scores, &manifest.accuracies, &metrics, &models, &datasets)?;
    let merged = with_static(scores, manifest, order)?;
    metrics.push(MetricId::Static);
    Ok(Evaluation {
        summary: SummaryTable::from_scores(
            &merged,
            &manifest.accuracies,
            &metrics,
            &datasets,
            &models,
        )?,
        ablation: ablation_rows(&merged, manifest, &metrics, plan)?,
        fidelity: fidelity_rows(&merged, manifest, &metrics)?,
        scatter: scatter_rows(&merged, manifest, &metrics)?,
    })
}

pub fn audit(manifest: &BenchmarkManifest, thresholds: &AuditThresholds) -> AuditReport {
    audit_benchmark(manifest, &manifest.accuracies, thresholds)
}
