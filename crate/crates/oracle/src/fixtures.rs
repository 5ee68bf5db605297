//! Synthetic feature/label fixtures.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use site_core::{FeatureMatrix, LabelVector};

use crate::Mat;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `classes` Gaussian blobs of unit spread; class `c` is centered at
/// `separation * e_(c mod d)` (scaled by `1 + c / d` when classes exceed `d`).
pub fn blobs(
    rng: &mut StdRng,
    per_class: usize,
    classes: usize,
    d: usize,
    separation: f64,
) -> (FeatureMatrix, LabelVector) {
    let n = per_class * classes;
    let mut values = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for c in 0..classes {
        for _ in 0..per_class {
            for j in 0..d {
                let z: f64 = StandardNormal.sample(rng);
                let center = if j == c % d {
                    separation * (1 + c / d) as f64
                } else {
                    0.0
                };
                values.push((center + z) as f32);
            }
            labels.push(c as u32);
        }
    }
    (
        FeatureMatrix::new("m", "ds", n, d, values).unwrap(),
        LabelVector::new("ds", labels).unwrap(),
    )
}

/// Standard normal features with balanced labels in shuffled order.
pub fn random(
    rng: &mut StdRng,
    n: usize,
    d: usize,
    classes: usize,
) -> (FeatureMatrix, LabelVector) {
    let values: Vec<f32> = (0..n * d)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            z as f32
        })
        .collect();
    let mut labels: Vec<u32> = (0..n).map(|i| (i % classes) as u32).collect();
    labels.shuffle(rng);
    (
        FeatureMatrix::new("m", "ds", n, d, values).unwrap(),
        LabelVector::new("ds", labels).unwrap(),
    )
}

/// Labels that depend linearly on the features plus noise; classes by quantile.
pub fn linear_labels(
    rng: &mut StdRng,
    n: usize,
    d: usize,
    classes: usize,
    noise: f64,
) -> (FeatureMatrix, LabelVector) {
    let (f, _) = random(rng, n, d, classes);
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut s: Vec<(f64, usize)> = (0..n)
        .map(|i| {
            let z: f64 = StandardNormal.sample(rng);
            (
                f.row(i)
                    .iter()
                    .zip(&w)
                    .map(|(a, b)| *a as f64 * b)
                    .sum::<f64>()
                    + noise * z,
                i,
            )
        })
        .collect();
    s.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut labels = vec![0u32; n];
    for (rank, (_, i)) in s.iter().enumerate() {
        labels[*i] = (rank * classes / n) as u32;
    }
    (f, LabelVector::new("ds", labels).unwrap())
}

pub fn to_rows(f: &FeatureMatrix) -> Mat {
    (0..f.n())
        .map(|i| f.row(i).iter().map(|v| *v as f64).collect())
        .collect()
}

/// Applies a row permutation to both features and labels.
pub fn permute_rows(
    f: &FeatureMatrix,
    y: &LabelVector,
    perm: &[usize],
) -> (FeatureMatrix, LabelVector) {
    let values: Vec<f32> = perm.iter().flat_map(|&i| f.row(i).to_vec()).collect();
    let labels: Vec<u32> = perm.iter().map(|&i| y.labels()[i]).collect();
    (
        FeatureMatrix::new(
            f.model_id.clone(),
            f.dataset_id.clone(),
            f.n(),
            f.d(),
            values,
        )
        .unwrap(),
        LabelVector::with_classes(y.dataset_id.clone(), labels, y.num_classes() as u32).unwrap(),
    )
}

/// Renames classes through the bijection `mapping[old] = new`.
pub fn relabel(y: &LabelVector, mapping: &[u32]) -> LabelVector {
    let labels = y.labels().iter().map(|&l| mapping[l as usize]).collect();
    LabelVector::with_classes(y.dataset_id.clone(), labels, y.num_classes() as u32).unwrap()
}

pub fn shuffled_labels(rng: &mut StdRng, y: &LabelVector) -> LabelVector {
    let mut labels = y.labels().to_vec();
    labels.shuffle(rng);
    LabelVector::with_classes(y.dataset_id.clone(), labels, y.num_classes() as u32).unwrap()
}
