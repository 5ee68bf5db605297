use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{MetricId, ModelRecord, ScoreTable};

/// Dataset-agnostic model ordering, best first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct StaticOrder(Vec<String>);

impl StaticOrder {
    pub fn new(order: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for m in &order {
            if !seen.insert(m.as_str()) {
                return Err(Error::Duplicate {
                    kind: "model in static order",
                    key: m.clone(),
                });
            }
        }
        Ok(Self(order))
    }

    /// Size-and-family alternation over the classic 11-model pool.
    pub fn standard() -> Self {
        Self(
            [
                "resnet152",
                "densenet201",
                "resnet101",
                "densenet169",
                "resnet50",
                "densenet121",
                "resnet34",
                "googlenet",
                "inception_v3",
                "mobilenet_v2",
                "mnasnet",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        )
    }

    pub fn models(&self) -> &[String] {
        &self.0
    }
}

impl TryFrom<Vec<String>> for StaticOrder {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<StaticOrder> for Vec<String> {
    fn from(o: StaticOrder) -> Self {
        o.0
    }
}

/// Orders models by parameter count, largest first; ties by model id.
pub fn order_by_params(models: &[ModelRecord]) -> StaticOrder {
    let mut sorted: Vec<&ModelRecord> = models.iter().collect();
    sorted.sort_by(|a, b| {
        b.params_millions
            .total_cmp(&a.params_millions)
            .then_with(|| a.model_id.cmp(&b.model_id))
    });
    StaticOrder(sorted.into_iter().map(|m| m.model_id.clone()).collect())
}

/// Static score per model: `count - position`, position taken within `models`
/// as they appear in `order`. Earlier means strictly larger.
pub fn static_scores(order: &StaticOrder, models: &[String]) -> Result<BTreeMap<String, f64>> {
    let wanted: BTreeSet<&str> = models.iter().map(String::as_str).collect();
    if let Some(missing) = models.iter().find(|m| !order.0.contains(m)) {
        return Err(Error::NotInOrder(missing.clone()));
    }
    let count = wanted.len();
    Ok(order
        .0
        .iter()
        .filter(|m| wanted.contains(m.as_str()))
        .enumerate()
        .map(|(pos, m)| (m.clone(), (count - pos) as f64))
        .collect())
}

/// Static scores replicated on every dataset under [`MetricId::Static`].
pub fn static_score_table(
    order: &StaticOrder,
    models: &[String],
    datasets: &[String],
) -> Result<ScoreTable> {
    let scores = static_scores(order, models)?;
    let mut table = ScoreTable::new();
    for d in datasets {
        for (m, v) in &scores {
            table.insert(MetricId::Static, m, d, *v)?;
        }
    }
    Ok(table)
}
