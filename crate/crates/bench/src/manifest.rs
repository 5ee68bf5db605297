//! Benchmark manifest JSON and the feature store it describes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use site_core::{
    AccuracyTable, BenchmarkManifest, DatasetRecord, FeatureFile, FeatureMatrix, LabelVector,
    ModelRecord,
};

use crate::error::{Error, Issue, Result};
use crate::{fsio, store};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyEntry {
    pub model: String,
    pub dataset: String,
    #[serde(deserialize_with = "decimal")]
    pub accuracy: f64,
}

/// Accepts a JSON number or a decimal string.
fn decimal<'de, D: serde::Deserializer<'de>>(de: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Decimal {
        Number(f64),
        Text(String),
    }
    match Decimal::deserialize(de)? {
        Decimal::Number(x) => Ok(x),
        Decimal::Text(s) => s.trim().parse().map_err(serde::de::Error::custom),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestDoc {
    pub version: u32,
    pub models: Vec<ModelRecord>,
    pub datasets: Vec<DatasetRecord>,
    #[serde(default)]
    pub features: Vec<FeatureFile>,
    #[serde(default)]
    pub accuracies: Vec<AccuracyEntry>,
}

impl ManifestDoc {
    pub fn into_manifest(self) -> site_core::Result<BenchmarkManifest> {
        let mut accuracies = AccuracyTable::new();
        for a in &self.accuracies {
            accuracies.insert(&a.model, &a.dataset, a.accuracy)?;
        }
        let manifest = BenchmarkManifest {
            version: self.version,
            models: self.models,
            datasets: self.datasets,
            features: self.features,
            accuracies,
        };
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn from_manifest(m: &BenchmarkManifest) -> Self {
        Self {
            version: m.version,
            models: m.models.clone(),
            datasets: m.datasets.clone(),
            features: m.features.clone(),
            accuracies: m
                .accuracies
                .iter()
                .map(|(model, dataset, accuracy)| AccuracyEntry {
                    model: model.to_string(),
                    dataset: dataset.to_string(),
                    accuracy,
                })
                .collect(),
        }
    }
}

pub fn parse_manifest(text: &str, path: &Path) -> Result<BenchmarkManifest> {
    let doc: ManifestDoc = serde_json::from_str(text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    doc.into_manifest().map_err(|source| Error::Data {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses and structurally validates a manifest without touching feature files.
pub fn read_manifest(path: &Path) -> Result<BenchmarkManifest> {
    let bytes = fsio::read(path)?;
    let text =
        String::from_utf8(bytes).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_manifest(&text, path)
}

pub fn write_manifest(manifest: &BenchmarkManifest, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&ManifestDoc::from_manifest(manifest))
        .expect("manifest serializes");
    text.push('\n');
    fsio::write_atomic(path, text.as_bytes())
}

/// A validated manifest together with the directory its feature paths are relative to.
#[derive(Debug, Clone)]
pub struct Store {
    pub root: PathBuf,
    pub manifest: BenchmarkManifest,
}

impl Store {
    /// Feature paths resolve against `root`, or the manifest's directory when `None`.
    pub fn open(manifest_path: &Path, root: Option<&Path>) -> Result<Self> {
        let manifest = read_manifest(manifest_path)?;
        let root = match root {
            Some(r) => r.to_path_buf(),
            None => manifest_path
                .parent()
                .map(Path::to_path_buf)
                .unwrap_or_default(),
        };
        Ok(Self { root, manifest })
    }

    pub fn path_of(&self, file: &FeatureFile) -> PathBuf {
        self.root.join(&file.path)
    }

    /// Reads one feature file, stamps the ids and checks the declared class count.
    pub fn load(&self, file: &FeatureFile) -> Result<(FeatureMatrix, LabelVector)> {
        let path = self.path_of(file);
        let (features, labels) = store::read_features(&path)?;
        let declared = self
            .manifest
            .dataset(&file.dataset)
            .ok_or_else(|| site_core::Error::UnknownDataset(file.dataset.clone()))?
            .num_classes;
        let labels = LabelVector::with_classes(&file.dataset, labels.labels().to_vec(), declared)
            .map_err(|e| Error::Data {
            path: path.clone(),
            source: match e {
                site_core::Error::Invalid { reason, .. } => site_core::Error::Invalid {
                    field: "num_classes",
                    reason: format!("{reason} (dataset {:?} declares {declared})", file.dataset),
                },
                other => other,
            },
        })?;
        Ok((features.with_ids(&file.model, &file.dataset), labels))
    }

    /// Every feature file is read and checked; all findings are returned.
    pub fn validate_files(&self) -> Vec<Issue> {
        let loaded: Vec<(usize, Result<LabelVector>)> = self
            .manifest
            .features
            .par_iter()
            .enumerate()
            .map(|(i, f)| (i, self.load(f).map(|(_, labels)| labels)))
            .collect();
        let mut issues = Vec::new();
        let mut first_labels: BTreeMap<&str, (&FeatureFile, LabelVector)> = BTreeMap::new();
        for (i, result) in loaded {
            let file = &self.manifest.features[i];
            match result {
                Err(e) => issues.push(Issue::from(&e)),
                Ok(labels) => match first_labels.get(file.dataset.as_str()) {
                    None => {
                        first_labels.insert(&file.dataset, (file, labels));
                    }
                    Some((reference, expected)) if expected.labels() != labels.labels() => {
                        issues.push(Issue::new(
                            "label_mismatch",
                            Some(self.path_of(file).display().to_string()),
                            format!(
                                "labels for dataset {:?} differ from those in {}",
                                file.dataset, reference.path
                            ),
                        ));
                    }
                    Some(_) => {}
                },
            }
        }
        issues
    }
}

/// Opens a manifest and validates every referenced feature file.
pub fn load_manifest(path: &Path, root: Option<&Path>) -> Result<Store> {
    let store = Store::open(path, root)?;
    let issues = store.validate_files();
    if issues.is_empty() {
        Ok(store)
    } else {
        Err(Error::Invalid(issues))
    }
}
