use alloc::format;
use alloc::vec::Vec;

use libm::{exp, log, sqrt};
use serde::{Deserialize, Serialize};

use super::{check_inputs, class_rows, Diagnostics, MetricScore};
use crate::error::Result;
use crate::linalg::{pca_dims, to_matrix};
use crate::types::{FeatureMatrix, LabelVector, MetricId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GbcOptions {
    pub variance_floor: f64,
    /// Reduce to this many principal axes before fitting (e.g. 64).
    pub pca_dims: Option<usize>,
}

impl Default for GbcOptions {
    fn default() -> Self {
        Self {
            variance_floor: 1e-6,
            pca_dims: None,
        }
    }
}

/// Bhattacharyya distance between two Gaussians with diagonal covariance.
pub fn bhattacharyya_diagonal(mean_a: &[f64], var_a: &[f64], mean_b: &[f64], var_b: &[f64]) -> f64 {
    let mut dist = 0.0;
    for j in 0..mean_a.len() {
        let avg = 0.5 * (var_a[j] + var_b[j]);
        let diff = mean_a[j] - mean_b[j];
        dist += diff * diff / (8.0 * avg) + 0.5 * log(avg / sqrt(var_a[j] * var_b[j]));
    }
    dist
}

/// `-sum_{c<c'} exp(-D_B(c, c'))` over per-class diagonal Gaussians.
pub fn gbc(
    features: &FeatureMatrix,
    labels: &LabelVector,
    opts: &GbcOptions,
) -> Result<MetricScore> {
    check_inputs(features, labels)?;
    let mut x = to_matrix(features, None);
    if let Some(k) = opts.pca_dims {
        if k < x.ncols() {
            x = pca_dims(&x, k);
        }
    }
    let d = x.ncols();

    let mut floored = 0usize;
    let mut gaussians: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for rows in class_rows(labels.labels(), labels.num_classes()) {
        let m = rows.len() as f64;
        let mut mean = alloc::vec![0.0; d];
        for &i in &rows {
            for j in 0..d {
                mean[j] += x[(i, j)];
            }
        }
        mean.iter_mut().for_each(|v| *v /= m);
        let mut var = alloc::vec![0.0; d];
        for &i in &rows {
            for j in 0..d {
                let diff = x[(i, j)] - mean[j];
                var[j] += diff * diff;
            }
        }
        for v in var.iter_mut() {
            *v /= m;
            if *v < opts.variance_floor {
                *v = opts.variance_floor;
                floored += 1;
            }
        }
        gaussians.push((mean, var));
    }

    let mut value = 0.0;
    for a in 0..gaussians.len() {
        for b in (a + 1)..gaussians.len() {
            let (ma, va) = &gaussians[a];
            let (mb, vb) = &gaussians[b];
            value -= exp(-bhattacharyya_diagonal(ma, va, mb, vb));
        }
    }

    let mut diagnostics = Diagnostics::default();
    if floored > 0 {
        diagnostics.notes.push(format!(
            "variance floored in {floored} class-dimension cells"
        ));
    }
    Ok(MetricScore::new(
        MetricId::Gbc,
        features,
        value,
        diagnostics,
    ))
}
