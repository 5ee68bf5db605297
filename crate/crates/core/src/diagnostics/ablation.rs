use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::evaluate_metric;
use crate::error::{Error, Result};
use crate::types::{AccuracyTable, MetricId, ScoreTable};

/// Models to remove cumulatively, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AblationPlan {
    pub removal_sequence: Vec<String>,
}

impl AblationPlan {
    pub fn new(removal_sequence: Vec<String>) -> Self {
        Self { removal_sequence }
    }

    /// Largest variants of the over-represented ResNet and DenseNet families.
    pub fn standard() -> Self {
        Self::new(
            ["resnet152", "resnet101", "densenet169", "densenet201"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
    }

    pub fn validate(&self, models: &[String]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for m in &self.removal_sequence {
            if !models.contains(m) {
                return Err(Error::UnknownModel(m.clone()));
            }
            if !seen.insert(m.as_str()) {
                return Err(Error::Duplicate {
                    kind: "model in ablation plan",
                    key: m.clone(),
                });
            }
        }
        let remaining = models.len() - self.removal_sequence.len();
        if remaining < 2 {
            return Err(Error::TooFewModels(remaining));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationPoint {
    /// Models removed so far, in removal order.
    pub removed: Vec<String>,
    pub model_count: usize,
    pub tau_w: f64,
}

/// Weighted tau after removing each prefix of the plan, starting with the full set.
pub fn ablation_sweep(
    scores: &ScoreTable,
    acc: &AccuracyTable,
    metric: MetricId,
    dataset: &str,
    models: &[String],
    plan: &AblationPlan,
) -> Result<Vec<AblationPoint>> {
    plan.validate(models)?;
    (0..=plan.removal_sequence.len())
        .map(|k| {
            let removed = &plan.removal_sequence[..k];
            let subset: Vec<String> = models
                .iter()
                .filter(|m| !removed.contains(m))
                .cloned()
                .collect();
            Ok(AblationPoint {
                removed: removed.to_vec(),
                model_count: subset.len(),
                tau_w: evaluate_metric(scores, acc, metric, dataset, &subset)?,
            })
        })
        .collect()
}
