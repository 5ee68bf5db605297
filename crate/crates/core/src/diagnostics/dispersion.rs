use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank::{kendall_tau, rank_desc, RankedScores};
use crate::types::AccuracyTable;

/// How much the ground-truth leaderboard changes across datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dispersion {
    /// Largest share of datasets won by a single model.
    pub top1_concentration: f64,
    /// Mean Kendall tau between the accuracy rankings of every dataset pair.
    pub mean_pairwise_tau: f64,
    /// Datasets won per model (models with no wins are listed with 0).
    pub winner_histogram: BTreeMap<String, usize>,
}

pub fn rank_dispersion(
    acc: &AccuracyTable,
    models: &[String],
    datasets: &[String],
) -> Result<Dispersion> {
    if datasets.len() < 2 {
        return Err(Error::TooFewDatasets(datasets.len()));
    }
    if models.len() < 2 {
        return Err(Error::TooFewModels(models.len()));
    }
    let columns = datasets
        .iter()
        .map(|d| {
            models
                .iter()
                .map(|m| acc.get(m, d))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut winner_histogram: BTreeMap<String, usize> =
        models.iter().map(|m| (m.clone(), 0)).collect();
    for col in &columns {
        let ranks = rank_desc(models, col);
        if let Some(best) = ranks.best() {
            *winner_histogram
                .get_mut(best)
                .expect("winner is one of the models") += 1;
        }
    }
    let top = winner_histogram.values().copied().max().unwrap_or(0);

    let mut tau_sum = 0.0;
    let mut pairs = 0usize;
    for a in 0..columns.len() {
        for b in (a + 1)..columns.len() {
            let rs = RankedScores::new(models.to_vec(), columns[a].clone(), columns[b].clone())?;
            tau_sum += kendall_tau(&rs);
            pairs += 1;
        }
    }
    Ok(Dispersion {
        top1_concentration: top as f64 / datasets.len() as f64,
        mean_pairwise_tau: tau_sum / pairs as f64,
        winner_histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| alloc::format!("{prefix}{i:02}")).collect()
    }

    #[test]
    fn static_leaderboard() {
        let models = ids("m", 4);
        let datasets = ids("d", 3);
        let mut acc = AccuracyTable::new();
        for d in &datasets {
            for (i, m) in models.iter().enumerate() {
                acc.insert(m, d, 0.9 - 0.1 * i as f64).unwrap();
            }
        }
        let disp = rank_dispersion(&acc, &models, &datasets).unwrap();
        assert_eq!(disp.top1_concentration, 1.0);
        assert_eq!(disp.mean_pairwise_tau, 1.0);
        assert_eq!(disp.winner_histogram["m00"], 3);
    }

    #[test]
    fn reversed_pair() {
        let models = ids("m", 3);
        let datasets = ids("d", 2);
        let mut acc = AccuracyTable::new();
        for (i, m) in models.iter().enumerate() {
            acc.insert(m, &datasets[0], 0.5 + 0.1 * i as f64).unwrap();
            acc.insert(m, &datasets[1], 0.5 - 0.1 * i as f64).unwrap();
        }
        let disp = rank_dispersion(&acc, &models, &datasets).unwrap();
        assert_eq!(disp.mean_pairwise_tau, -1.0);
        assert_eq!(disp.top1_concentration, 0.5);
    }

    #[test]
    fn needs_two_datasets() {
        let models = ids("m", 2);
        let err = rank_dispersion(&AccuracyTable::new(), &models, &["x".to_string()]).unwrap_err();
        assert_eq!(err, Error::TooFewDatasets(1));
    }
}
