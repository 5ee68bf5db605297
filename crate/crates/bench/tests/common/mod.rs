#![allow(dead_code)]

use std::path::{Path, PathBuf};

use site_bench::{write_features, write_manifest};
use site_core::{AccuracyTable, BenchmarkManifest, DatasetRecord, FeatureFile, ModelRecord};
use site_oracle::benchmarks::STANDARD_POOL;
use site_oracle::fixtures::{self, rng};
use tempfile::TempDir;

/// A benchmark on disk: `data/manifest.json`, `data/features/*.sitb`, `config.json`.
pub struct Bench {
    pub dir: TempDir,
    pub manifest: BenchmarkManifest,
}

impl Bench {
    pub fn root(&self) -> &Path {
        self.dir.path()
    }

    pub fn data(&self) -> PathBuf {
        self.dir.path().join("data")
    }

    pub fn config(&self) -> PathBuf {
        self.dir.path().join("config.json")
    }

    pub fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }

    pub fn feature_path(&self, model: &str, dataset: &str) -> PathBuf {
        self.data()
            .join(format!("features/{model}__{dataset}.sitb"))
    }

    pub fn rewrite_manifest(&self, f: impl FnOnce(&mut BenchmarkManifest)) {
        let mut m = self.manifest.clone();
        f(&mut m);
        write_manifest(&m, &self.data().join("manifest.json")).unwrap();
    }
}

pub struct Layout<'a> {
    /// (id, family, params, class separation)
    pub models: Vec<(&'a str, &'a str, f64, f64)>,
    /// (id, classes, domain)
    pub datasets: Vec<(&'a str, u32, &'a str)>,
    pub per_class: usize,
    pub dim: usize,
    pub seed: u64,
}

/// Standard pool where larger models separate classes better.
pub fn standard_layout<'a>(datasets: Vec<(&'a str, u32, &'a str)>) -> Layout<'a> {
    Layout {
        models: STANDARD_POOL
            .iter()
            .map(|&(id, fam, p)| (id, fam, p, 0.5 + p.ln() * 0.4))
            .collect(),
        datasets,
        per_class: 8,
        dim: 6,
        seed: 3,
    }
}

pub fn build(layout: &Layout, config_json: &str) -> Bench {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(layout.seed);
    let mut features = Vec::new();
    let mut acc = AccuracyTable::new();
    let bench_root = dir.path().join("data");
    for (k, &(d, classes, _)) in layout.datasets.iter().enumerate() {
        for &(m, _, _, sep) in &layout.models {
            let (f, y) =
                fixtures::blobs(&mut r, layout.per_class, classes as usize, layout.dim, sep);
            let rel = format!("features/{m}__{d}.sitb");
            write_features(&f, &y, &bench_root.join(&rel)).unwrap();
            features.push(FeatureFile {
                model: m.to_string(),
                dataset: d.to_string(),
                path: rel,
            });
            let a = (0.6 + 0.08 * sep - 0.03 * k as f64).clamp(0.0, 0.98);
            acc.insert(m, d, (a * 1e6).round() / 1e6).unwrap();
        }
    }
    let manifest = BenchmarkManifest {
        version: 1,
        models: layout
            .models
            .iter()
            .map(|&(id, fam, p, _)| ModelRecord::new(id, fam, p))
            .collect(),
        datasets: layout
            .datasets
            .iter()
            .map(|&(id, c, dom)| DatasetRecord::new(id, c, dom))
            .collect(),
        features,
        accuracies: acc,
    };
    write_manifest(&manifest, &bench_root.join("manifest.json")).unwrap();
    std::fs::write(dir.path().join("config.json"), config_json).unwrap();
    Bench { dir, manifest }
}

pub const CONFIG: &str = r#"{"data_root": "data", "output_dir": "out"}"#;
