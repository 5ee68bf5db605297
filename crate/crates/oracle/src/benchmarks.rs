//! Tabular fixtures: model pools, accuracy tables and printed tau values.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use site_core::diagnostics::StaticOrder;
use site_core::{AccuracyTable, BenchmarkManifest, DatasetRecord, ModelRecord};

/// The eleven ImageNet classifiers with their torchvision parameter counts (millions).
pub const STANDARD_POOL: [(&str, &str, f64); 11] = [
    ("resnet34", "resnet", 21.8),
    ("resnet50", "resnet", 25.6),
    ("resnet101", "resnet", 44.5),
    ("resnet152", "resnet", 60.2),
    ("densenet121", "densenet", 8.0),
    ("densenet169", "densenet", 14.1),
    ("densenet201", "densenet", 20.0),
    ("googlenet", "googlenet", 6.6),
    ("inception_v3", "inception", 27.2),
    ("mobilenet_v2", "mobilenet", 3.5),
    ("mnasnet", "mnasnet", 4.4),
];

pub const STANDARD_DATASETS: [(&str, u32, &str); 6] = [
    ("aircraft", 100, "fine-grained"),
    ("cifar10", 10, "natural"),
    ("cifar100", 100, "natural"),
    ("dtd", 47, "texture"),
    ("food", 101, "fine-grained"),
    ("pets", 37, "fine-grained"),
];

/// Reference per-dataset weighted tau for each metric on the standard pool (columns follow `STANDARD_DATASETS`).
pub const REFERENCE_TAU: [(&str, [f64; 6]); 7] = [
    ("gbc", [-0.12, -0.02, 0.09, 0.14, 0.10, -0.15]),
    ("transrate", [0.14, 0.51, 0.20, 0.20, -0.05, 0.17]),
    ("sfda", [-0.22, 0.85, 0.79, 0.63, 0.30, 0.34]),
    ("hscore", [0.60, 0.91, 0.80, 0.04, 0.59, 0.37]),
    ("nleep", [-0.51, 0.76, 0.84, 0.70, 0.69, 0.84]),
    ("logme", [0.41, 0.85, 0.72, 0.66, 0.39, 0.41]),
    ("static", [0.84, 0.91, 0.98, 0.99, 0.80, 0.94]),
];

/// Reference Average column for the rows of `REFERENCE_TAU`.
pub const REFERENCE_AVERAGE: [f64; 7] = [0.007, 0.195, 0.448, 0.552, 0.553, 0.573, 0.910];

pub fn ids(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn standard_models() -> Vec<String> {
    STANDARD_POOL.iter().map(|m| m.0.to_string()).collect()
}

pub fn standard_datasets() -> Vec<String> {
    STANDARD_DATASETS.iter().map(|d| d.0.to_string()).collect()
}

/// Manifest of the standard pool with no feature files.
pub fn standard_manifest(acc: AccuracyTable) -> BenchmarkManifest {
    BenchmarkManifest {
        version: 1,
        models: STANDARD_POOL
            .iter()
            .map(|(id, fam, p)| ModelRecord::new(id, fam, *p))
            .collect(),
        datasets: STANDARD_DATASETS
            .iter()
            .map(|(id, c, dom)| DatasetRecord::new(id, *c, dom))
            .collect(),
        features: Vec::new(),
        accuracies: acc,
    }
}

/// Accuracies strictly decreasing along `order` on every dataset, with random gaps.
pub fn accuracies_following(
    rng: &mut StdRng,
    order: &[String],
    datasets: &[String],
) -> AccuracyTable {
    let mut acc = AccuracyTable::new();
    for d in datasets {
        let mut a: f64 = rng.random_range(0.85..0.95);
        for m in order {
            acc.insert(m, d, a).unwrap();
            a -= rng.random_range(0.001..0.02);
        }
    }
    acc
}

/// Accuracies for `models` on `datasets` where model `winners[k]` tops dataset `k`.
pub fn accuracies_with_winners(
    rng: &mut StdRng,
    models: &[String],
    datasets: &[String],
    winners: &[&str],
) -> AccuracyTable {
    let mut acc = AccuracyTable::new();
    for (d, winner) in datasets.iter().zip(winners) {
        let mut rest: Vec<&String> = models.iter().filter(|m| m.as_str() != *winner).collect();
        rest.shuffle(rng);
        acc.insert(winner, d, 0.95).unwrap();
        for (k, m) in rest.iter().enumerate() {
            acc.insert(m, d, 0.90 - 0.01 * k as f64).unwrap();
        }
    }
    acc
}

/// Eleven models over ten datasets where resnet152 wins eight.
pub fn eight_of_ten(rng: &mut StdRng) -> (Vec<String>, Vec<String>, AccuracyTable) {
    let models = StaticOrder::standard().models().to_vec();
    let datasets: Vec<String> = (0..10).map(|k| format!("ds{k:02}")).collect();
    let mut winners = vec!["resnet152"; 8];
    winners.extend(["densenet201", "resnet101"]);
    winners.shuffle(rng);
    let acc = accuracies_with_winners(rng, &models, &datasets, &winners);
    (models, datasets, acc)
}

/// One model per family, parameter counts within 1.2x, three domains and
/// a different winner on every dataset.
pub fn clean_pool(rng: &mut StdRng) -> (BenchmarkManifest, AccuracyTable) {
    let pool = [
        ("convnext_t", "convnext", 28.6),
        ("swin_t", "swin", 28.3),
        ("regnet_y_3_2gf", "regnet", 25.6),
        ("efficientnet_b4", "efficientnet", 24.0),
        ("resnet50", "resnet", 25.6),
    ];
    let datasets = [
        ("birds", 200u32, "fine-grained"),
        ("dtd", 47, "texture"),
        ("eurosat", 10, "satellite"),
        ("flowers", 102, "fine-grained"),
        ("cifar100", 100, "natural"),
    ];
    let models: Vec<String> = pool.iter().map(|m| m.0.to_string()).collect();
    let ds: Vec<String> = datasets.iter().map(|d| d.0.to_string()).collect();
    let winners: Vec<&str> = pool.iter().map(|m| m.0).collect();
    let acc = accuracies_with_winners(rng, &models, &ds, &winners);
    let manifest = BenchmarkManifest {
        version: 1,
        models: pool
            .iter()
            .map(|(id, f, p)| ModelRecord::new(id, f, *p))
            .collect(),
        datasets: datasets
            .iter()
            .map(|(id, c, dom)| DatasetRecord::new(id, *c, dom))
            .collect(),
        features: Vec::new(),
        accuracies: acc.clone(),
    };
    (manifest, acc)
}
