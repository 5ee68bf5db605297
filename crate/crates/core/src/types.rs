//! Domain records shared by the metrics, the diagnostics and the storage layer.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Embedding matrix produced by one model on one dataset, row-major `n x d`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub model_id: String,
    pub dataset_id: String,
    n: usize,
    d: usize,
    values: Vec<f32>,
}

impl FeatureMatrix {
    pub fn new(
        model_id: impl Into<String>,
        dataset_id: impl Into<String>,
        n: usize,
        d: usize,
        values: Vec<f32>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid {
                field: "n",
                reason: format!("at least 2 samples required, got {n}"),
            });
        }
        if d < 1 {
            return Err(Error::Invalid {
                field: "d",
                reason: "embedding dimension must be at least 1".to_string(),
            });
        }
        if n.checked_mul(d) != Some(values.len()) {
            return Err(Error::Invalid {
                field: "values",
                reason: format!("expected {n}x{d} entries, got {}", values.len()),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / d,
                col: pos % d,
            });
        }
        Ok(Self {
            model_id: model_id.into(),
            dataset_id: dataset_id.into(),
            n,
            d,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn with_ids(mut self, model_id: impl Into<String>, dataset_id: impl Into<String>) -> Self {
        self.model_id = model_id.into();
        self.dataset_id = dataset_id.into();
        self
    }

    /// Row indices sorted lexicographically by the raw `f32` row values.
    ///
    /// The order depends only on the multiset of rows, so any computation
    /// that walks rows in this order is invariant to row permutations.
    pub fn canonical_row_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.sort_by(|&a, &b| {
            self.row(a)
                .iter()
                .zip(self.row(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        });
        idx
    }
}

/// Class indices aligned with the rows of a [`FeatureMatrix`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    pub dataset_id: String,
    labels: Vec<u32>,
    num_classes: u32,
}

impl LabelVector {
    /// Infers the class count as `max(label) + 1`.
    pub fn new(dataset_id: impl Into<String>, labels: Vec<u32>) -> Result<Self> {
        let num_classes = labels.iter().max().map_or(0, |m| m + 1);
        Self::with_classes(dataset_id, labels, num_classes)
    }

    pub fn with_classes(
        dataset_id: impl Into<String>,
        labels: Vec<u32>,
        num_classes: u32,
    ) -> Result<Self> {
        if num_classes < 2 {
            return Err(Error::Invalid {
                field: "num_classes",
                reason: format!("at least 2 classes required, got {num_classes}"),
            });
        }
        let mut counts = alloc::vec![0usize; num_classes as usize];
        for &l in &labels {
            if l >= num_classes {
                return Err(Error::Invalid {
                    field: "labels",
                    reason: format!("label {l} outside [0, {num_classes})"),
                });
            }
            counts[l as usize] += 1;
        }
        if let Some((class, &count)) = counts.iter().enumerate().find(|(_, &c)| c < 2) {
            return Err(Error::ClassTooRare {
                class: class as u32,
                count,
            });
        }
        Ok(Self {
            dataset_id: dataset_id.into(),
            labels,
            num_classes,
        })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes as usize
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0usize; self.num_classes()];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
    }
}

/// Checks that features and labels describe the same samples.
pub fn check_aligned(features: &FeatureMatrix, labels: &LabelVector) -> Result<()> {
    if features.n() != labels.len() {
        return Err(Error::LabelCountMismatch {
            labels: labels.len(),
            rows: features.n(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    #[serde(rename = "id")]
    pub model_id: String,
    pub family: String,
    pub params_millions: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl ModelRecord {
    pub fn new(model_id: &str, family: &str, params_millions: f64) -> Self {
        Self {
            model_id: model_id.to_string(),
            family: family.to_string(),
            params_millions,
            notes: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    #[serde(rename = "id")]
    pub dataset_id: String,
    pub num_classes: u32,
    #[serde(rename = "domain")]
    pub domain_tag: String,
}

impl DatasetRecord {
    pub fn new(dataset_id: &str, num_classes: u32, domain_tag: &str) -> Self {
        Self {
            dataset_id: dataset_id.to_string(),
            num_classes,
            domain_tag: domain_tag.to_string(),
        }
    }
}

/// Location of the feature file for one (model, dataset) pair, relative to the data root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureFile {
    pub model: String,
    pub dataset: String,
    pub path: String,
}

/// Fine-tuned test accuracy per (model, dataset); the ground truth for rankings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AccuracyTable {
    entries: BTreeMap<(String, String), f64>,
}

impl AccuracyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, model: &str, dataset: &str, accuracy: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&accuracy) {
            return Err(Error::Invalid {
                field: "accuracy",
                reason: format!("{accuracy} for ({model}, {dataset}) outside [0, 1]"),
            });
        }
        let key = (model.to_string(), dataset.to_string());
        if self.entries.insert(key, accuracy).is_some() {
            return Err(Error::Duplicate {
                kind: "accuracy entry",
                key: format!("{model}/{dataset}"),
            });
        }
        Ok(())
    }

    pub fn get(&self, model: &str, dataset: &str) -> Result<f64> {
        self.entries
            .get(&(model.to_string(), dataset.to_string()))
            .copied()
            .ok_or_else(|| Error::MissingEntry {
                table: "accuracy",
                model: model.to_string(),
                dataset: dataset.to_string(),
            })
    }

    /// Accuracies for one dataset keyed by model id.
    pub fn for_dataset(&self, dataset: &str) -> BTreeMap<String, f64> {
        self.entries
            .iter()
            .filter(|((_, d), _)| d == dataset)
            .map(|((m, _), v)| (m.clone(), *v))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.entries
            .iter()
            .map(|((m, d), v)| (m.as_str(), d.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Identifier of a scoring rule. `Static` is the dataset-agnostic baseline and has
/// no feature-based implementation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricId {
    Gbc,
    TransRate,
    Sfda,
    HScore,
    Nleep,
    LogMe,
    Static,
}

impl MetricId {
    pub const FEATURE_METRICS: [MetricId; 6] = [
        MetricId::Gbc,
        MetricId::TransRate,
        MetricId::Sfda,
        MetricId::HScore,
        MetricId::Nleep,
        MetricId::LogMe,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Gbc => "gbc",
            MetricId::TransRate => "transrate",
            MetricId::Sfda => "sfda",
            MetricId::HScore => "hscore",
            MetricId::Nleep => "nleep",
            MetricId::LogMe => "logme",
            MetricId::Static => "static",
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gbc" => MetricId::Gbc,
            "transrate" => MetricId::TransRate,
            "sfda" => MetricId::Sfda,
            "hscore" => MetricId::HScore,
            "nleep" => MetricId::Nleep,
            "logme" => MetricId::LogMe,
            "static" => MetricId::Static,
            other => return Err(Error::UnknownMetric(other.to_string())),
        })
    }
}

/// Transferability score per (metric, model, dataset).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreTable {
    entries: BTreeMap<(MetricId, String, String), f64>,
}

impl ScoreTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        metric: MetricId,
        model: &str,
        dataset: &str,
        score: f64,
    ) -> Result<()> {
        if !score.is_finite() {
            return Err(Error::Invalid {
                field: "score",
                reason: format!("non-finite score for {metric}/{model}/{dataset}"),
            });
        }
        self.entries
            .insert((metric, model.to_string(), dataset.to_string()), score);
        Ok(())
    }

    pub fn get(&self, metric: MetricId, model: &str, dataset: &str) -> Result<f64> {
        self.entries
            .get(&(metric, model.to_string(), dataset.to_string()))
            .copied()
            .ok_or_else(|| Error::MissingEntry {
                table: "score",
                model: model.to_string(),
                dataset: dataset.to_string(),
            })
    }

    pub fn metrics(&self) -> BTreeSet<MetricId> {
        self.entries.keys().map(|(m, _, _)| *m).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (MetricId, &str, &str, f64)> {
        self.entries
            .iter()
            .map(|((m, model, d), v)| (*m, model.as_str(), d.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Registry of models, datasets, feature files and ground-truth accuracies.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkManifest {
    pub version: u32,
    pub models: Vec<ModelRecord>,
    pub datasets: Vec<DatasetRecord>,
    pub features: Vec<FeatureFile>,
    pub accuracies: AccuracyTable,
}

impl BenchmarkManifest {
    /// Structural validation: ids, cross references, duplicates and value ranges.
    /// Feature file contents are checked by the storage layer.
    pub fn validate(&self) -> Result<()> {
        if self.models.len() < 2 {
            return Err(Error::TooFewModels(self.models.len()));
        }
        let mut models = BTreeSet::new();
        for m in &self.models {
            if !models.insert(m.model_id.as_str()) {
                return Err(Error::Duplicate {
                    kind: "model_id",
                    key: m.model_id.clone(),
                });
            }
            if !(m.params_millions.is_finite() && m.params_millions > 0.0) {
                return Err(Error::Invalid {
                    field: "params_millions",
                    reason: format!(
                        "{} for model {:?} must be positive",
                        m.params_millions, m.model_id
                    ),
                });
            }
        }
        let mut datasets = BTreeSet::new();
        for d in &self.datasets {
            if !datasets.insert(d.dataset_id.as_str()) {
                return Err(Error::Duplicate {
                    kind: "dataset_id",
                    key: d.dataset_id.clone(),
                });
            }
            if d.num_classes < 2 {
                return Err(Error::Invalid {
                    field: "num_classes",
                    reason: format!(
                        "dataset {:?} declares {} classes",
                        d.dataset_id, d.num_classes
                    ),
                });
            }
        }
        let mut pairs = BTreeSet::new();
        for f in &self.features {
            if !models.contains(f.model.as_str()) {
                return Err(Error::UnknownModel(f.model.clone()));
            }
            if !datasets.contains(f.dataset.as_str()) {
                return Err(Error::UnknownDataset(f.dataset.clone()));
            }
            if !pairs.insert((f.model.as_str(), f.dataset.as_str())) {
                return Err(Error::Duplicate {
                    kind: "feature pair",
                    key: format!("{}/{}", f.model, f.dataset),
                });
            }
        }
        for (m, d, _) in self.accuracies.iter() {
            if !models.contains(m) {
                return Err(Error::UnknownModel(m.to_string()));
            }
            if !datasets.contains(d) {
                return Err(Error::UnknownDataset(d.to_string()));
            }
        }
        Ok(())
    }

    pub fn model(&self, id: &str) -> Option<&ModelRecord> {
        self.models.iter().find(|m| m.model_id == id)
    }

    pub fn dataset(&self, id: &str) -> Option<&DatasetRecord> {
        self.datasets.iter().find(|d| d.dataset_id == id)
    }

    pub fn model_ids(&self) -> Vec<String> {
        self.models.iter().map(|m| m.model_id.clone()).collect()
    }

    pub fn dataset_ids(&self) -> Vec<String> {
        self.datasets.iter().map(|d| d.dataset_id.clone()).collect()
    }
}
