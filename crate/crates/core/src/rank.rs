//! Rank correlation between predicted scores and ground-truth accuracies.
//!
//! Weighted Kendall's tau uses hyperbolic weights `1/(r+1) + 1/(s+1)` on the
//! ground-truth ranks of each pair, so disagreements among the top models
//! cost the most. The sum is normalized by the total pair weight, which keeps
//! the statistic in `[-1, 1]`. Tied pairs contribute zero to the numerator
//! but keep their weight in the denominator.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use libm::sqrt;

use crate::error::{Error, Result};

/// Ground truth and predicted scores aligned to the same model ids.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedScores {
    model_ids: Vec<String>,
    ground_truth: Vec<f64>,
    predicted: Vec<f64>,
}

impl RankedScores {
    pub fn new(
        model_ids: Vec<String>,
        ground_truth: Vec<f64>,
        predicted: Vec<f64>,
    ) -> Result<Self> {
        if ground_truth.len() != model_ids.len() {
            return Err(Error::LengthMismatch(model_ids.len(), ground_truth.len()));
        }
        if predicted.len() != model_ids.len() {
            return Err(Error::LengthMismatch(model_ids.len(), predicted.len()));
        }
        if model_ids.len() < 2 {
            return Err(Error::TooFewModels(model_ids.len()));
        }
        if ground_truth
            .iter()
            .chain(&predicted)
            .any(|v| !v.is_finite())
        {
            return Err(Error::Invalid {
                field: "scores",
                reason: "ranked values must be finite".to_string(),
            });
        }
        Ok(Self {
            model_ids,
            ground_truth,
            predicted,
        })
    }

    /// Uses `m0, m1, ...` as model ids.
    pub fn anonymous(ground_truth: Vec<f64>, predicted: Vec<f64>) -> Result<Self> {
        let ids = (0..ground_truth.len())
            .map(|i| format!("m{i:04}"))
            .collect();
        Self::new(ids, ground_truth, predicted)
    }

    pub fn model_ids(&self) -> &[String] {
        &self.model_ids
    }

    pub fn ground_truth(&self) -> &[f64] {
        &self.ground_truth
    }

    pub fn predicted(&self) -> &[f64] {
        &self.predicted
    }

    pub fn len(&self) -> usize {
        self.model_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.model_ids.is_empty()
    }
}

/// Rank of each model, 0 = best, aligned with the ids it was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankAssignment {
    pub model_ids: Vec<String>,
    pub ranks: Vec<usize>,
}

impl RankAssignment {
    pub fn get(&self, model_id: &str) -> Option<usize> {
        self.model_ids
            .iter()
            .position(|m| m == model_id)
            .map(|i| self.ranks[i])
    }

    /// Model holding rank 0.
    pub fn best(&self) -> Option<&str> {
        self.ranks
            .iter()
            .position(|&r| r == 0)
            .map(|i| self.model_ids[i].as_str())
    }
}

/// Ranks values in descending order; ties go to the smaller model id first.
pub fn rank_desc<S: AsRef<str>>(model_ids: &[S], values: &[f64]) -> RankAssignment {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .total_cmp(&values[a])
            .then_with(|| model_ids[a].as_ref().cmp(model_ids[b].as_ref()))
    });
    let mut ranks = alloc::vec![0; values.len()];
    for (rank, &i) in order.iter().enumerate() {
        ranks[i] = rank;
    }
    RankAssignment {
        model_ids: model_ids.iter().map(|m| m.as_ref().to_string()).collect(),
        ranks,
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Kendall's tau-a: mean pair concordance over all `M(M-1)/2` pairs.
pub fn kendall_tau(rs: &RankedScores) -> f64 {
    let (g, t) = (&rs.ground_truth, &rs.predicted);
    let m = g.len();
    let mut sum = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            sum += sgn(g[i] - g[j]) * sgn(t[i] - t[j]);
        }
    }
    2.0 * sum / (m * (m - 1)) as f64
}

/// Hyperbolic pair weight for ranks `r` and `s`.
pub fn hyperbolic_weight(r: usize, s: usize) -> f64 {
    1.0 / (r as f64 + 1.0) + 1.0 / (s as f64 + 1.0)
}

/// Weighted Kendall's tau with hyperbolic weights on the ground-truth ranking.
pub fn weighted_kendall_tau(rs: &RankedScores) -> f64 {
    let (g, t) = (&rs.ground_truth, &rs.predicted);
    let rho = rank_desc(&rs.model_ids, g).ranks;
    let m = g.len();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..m {
        for j in (i + 1)..m {
            let w = hyperbolic_weight(rho[i], rho[j]);
            num += sgn(g[i] - g[j]) * sgn(t[i] - t[j]) * w;
            den += w;
        }
    }
    (num / den).clamp(-1.0, 1.0)
}

/// Pearson product-moment correlation. Undefined (an error) when either input
/// has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than 2 points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxx += da * da;
        syy += db * db;
        sxy += da * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("constant input"));
    }
    Ok((sxy / sqrt(sxx * syy)).clamp(-1.0, 1.0))
}
