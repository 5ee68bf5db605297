use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank::pearson;
use crate::types::{AccuracyTable, MetricId, ScoreTable};

/// Correlation between pairwise score gaps and pairwise accuracy gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRecord {
    pub metric: MetricId,
    pub dataset: String,
    /// `None` when the correlation is undefined (constant scores or accuracies).
    pub pearson_r: Option<f64>,
    pub pair_count: usize,
    pub flag: Option<String>,
}

/// Signed differences `v_i - v_j` for all `i < j`, models in ascending id order.
pub fn delta_pairs(values: &BTreeMap<String, f64>, models: &[String]) -> Result<Vec<f64>> {
    let mut ids: Vec<&String> = models.iter().collect();
    ids.sort();
    ids.dedup();
    let vals = ids
        .iter()
        .map(|m| {
            values
                .get(*m)
                .copied()
                .ok_or_else(|| Error::UnknownModel((*m).clone()))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut out = Vec::with_capacity(vals.len() * vals.len().saturating_sub(1) / 2);
    for i in 0..vals.len() {
        for j in (i + 1)..vals.len() {
            out.push(vals[i] - vals[j]);
        }
    }
    Ok(out)
}

pub fn fidelity_correlation(
    scores: &ScoreTable,
    acc: &AccuracyTable,
    metric: MetricId,
    dataset: &str,
    models: &[String],
) -> Result<FidelityRecord> {
    let mut accuracies = BTreeMap::new();
    let mut values = BTreeMap::new();
    for m in models {
        accuracies.insert(m.clone(), acc.get(m, dataset)?);
        values.insert(m.clone(), scores.get(metric, m, dataset)?);
    }
    let delta_acc = delta_pairs(&accuracies, models)?;
    let delta_score = delta_pairs(&values, models)?;
    let (pearson_r, flag) = match pearson(&delta_acc, &delta_score) {
        Ok(r) => (Some(r), None),
        Err(e @ Error::UndefinedCorrelation(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(FidelityRecord {
        metric,
        dataset: dataset.to_string(),
        pearson_r,
        pair_count: delta_acc.len(),
        flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn delta_examples() {
        let vals: BTreeMap<String, f64> = [("A", 0.9), ("B", 0.8), ("C", 0.7)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let d = delta_pairs(&vals, &ids(&["C", "A", "B"])).unwrap();
        let expected = [0.1, 0.2, 0.1];
        for (a, b) in d.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let flat: BTreeMap<String, f64> = ["A", "B"].iter().map(|k| (k.to_string(), 3.0)).collect();
        assert_eq!(delta_pairs(&flat, &ids(&["A", "B"])).unwrap(), vec![0.0]);
    }

    #[test]
    fn constant_scores_are_flagged() {
        let models = ids(&["a", "b", "c"]);
        let mut acc = AccuracyTable::new();
        let mut scores = ScoreTable::new();
        for (i, m) in models.iter().enumerate() {
            acc.insert(m, "x", 0.5 + 0.1 * i as f64).unwrap();
            scores.insert(MetricId::Gbc, m, "x", -1.0).unwrap();
        }
        let rec = fidelity_correlation(&scores, &acc, MetricId::Gbc, "x", &models).unwrap();
        assert_eq!(rec.pearson_r, None);
        assert_eq!(rec.pair_count, 3);
        assert!(rec.flag.unwrap().contains("correlation undefined"));
    }
}
