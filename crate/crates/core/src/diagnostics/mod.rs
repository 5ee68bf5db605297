//! Benchmark diagnostics: the static baseline, model-ablation sweeps,
//! fidelity of score gaps to accuracy gaps, rank dispersion and the
//! benchmark-construction audit.

mod ablation;
mod audit;
mod dispersion;
mod fidelity;
mod static_rank;

use alloc::string::String;
use alloc::vec::Vec;

pub use ablation::{ablation_sweep, AblationPlan, AblationPoint};
pub use audit::{
    audit_benchmark, AuditReport, AuditThresholds, CheckResult, DispersionSummary, Verdict,
};
pub use dispersion::{rank_dispersion, Dispersion};
pub use fidelity::{delta_pairs, fidelity_correlation, FidelityRecord};
pub use static_rank::{order_by_params, static_score_table, static_scores, StaticOrder};

use crate::error::Result;
use crate::rank::{weighted_kendall_tau, RankedScores};
use crate::types::{AccuracyTable, MetricId, ScoreTable};

/// Weighted Kendall's tau of one metric on one dataset over `models`.
pub fn evaluate_metric(
    scores: &ScoreTable,
    acc: &AccuracyTable,
    metric: MetricId,
    dataset: &str,
    models: &[String],
) -> Result<f64> {
    Ok(weighted_kendall_tau(&ranked(
        scores, acc, metric, dataset, models,
    )?))
}

pub(crate) fn ranked(
    scores: &ScoreTable,
    acc: &AccuracyTable,
    metric: MetricId,
    dataset: &str,
    models: &[String],
) -> Result<RankedScores> {
    let mut truth = Vec::with_capacity(models.len());
    let mut predicted = Vec::with_capacity(models.len());
    for m in models {
        truth.push(acc.get(m, dataset)?);
        predicted.push(scores.get(metric, m, dataset)?);
    }
    RankedScores::new(models.to_vec(), truth, predicted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn three_model_hand_case() {
        let models: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let mut acc = AccuracyTable::new();
        let mut scores = ScoreTable::new();
        for (m, g, t) in [("a", 0.9, 0.5), ("b", 0.8, 0.7), ("c", 0.7, 0.6)] {
            acc.insert(m, "x", g).unwrap();
            scores.insert(MetricId::LogMe, m, "x", t).unwrap();
        }
        let tau = evaluate_metric(&scores, &acc, MetricId::LogMe, "x", &models).unwrap();
        assert!((tau + 0.5455).abs() < 1e-4);
    }

    #[test]
    fn missing_entry_names_pair() {
        let models = vec!["a".to_string(), "b".to_string()];
        let mut acc = AccuracyTable::new();
        acc.insert("a", "x", 0.5).unwrap();
        let mut scores = ScoreTable::new();
        scores.insert(MetricId::Gbc, "a", "x", -0.5).unwrap();
        scores.insert(MetricId::Gbc, "b", "x", -0.2).unwrap();
        let err = evaluate_metric(&scores, &acc, MetricId::Gbc, "x", &models).unwrap_err();
        assert_eq!(
            err,
            Error::MissingEntry {
                table: "accuracy",
                model: "b".into(),
                dataset: "x".into()
            }
        );
    }
}
