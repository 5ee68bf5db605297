use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_inputs, Diagnostics, MetricScore};
use crate::error::Result;
use crate::linalg::{column_means, covariance, pinv_symmetric, to_matrix};
use crate::types::{FeatureMatrix, LabelVector, MetricId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HScoreOptions {
    /// Eigenvalues below `rel_cutoff * max_eigenvalue` are dropped from the pseudo-inverse.
    pub rel_cutoff: f64,
}

impl Default for HScoreOptions {
    fn default() -> Self {
        Self { rel_cutoff: 1e-10 }
    }
}

/// `trace(pinv(cov(f)) * cov(E[f|y]))` with population covariances.
pub fn hscore(
    features: &FeatureMatrix,
    labels: &LabelVector,
    opts: &HScoreOptions,
) -> Result<MetricScore> {
    check_inputs(features, labels)?;
    let x = to_matrix(features, None);
    let n = x.nrows() as f64;
    let d = x.ncols();
    let cov_f = covariance(&x);

    // cov of the class-mean assignment: sum_c (n_c/n) (mu_c - mu)(mu_c - mu)^T
    let mu = column_means(&x);
    let mut sums: Vec<DVector<f64>> = (0..labels.num_classes())
        .map(|_| DVector::zeros(d))
        .collect();
    for (i, &l) in labels.labels().iter().enumerate() {
        sums[l as usize] += x.row(i).transpose();
    }
    let mut cov_z = DMatrix::zeros(d, d);
    for (sum, &count) in sums.iter().zip(&labels.class_counts()) {
        let diff = sum / count as f64 - &mu;
        cov_z += (&diff * diff.transpose()) * (count as f64 / n);
    }

    let (pinv, rank) = pinv_symmetric(&cov_f, opts.rel_cutoff);
    let mut diagnostics = Diagnostics::default();
    if rank < d {
        diagnostics.notes.push(format!(
            "rank-deficient: feature covariance has rank {rank} of {d}"
        ));
    }
    let value = if rank == 0 {
        0.0
    } else {
        pinv.component_mul(&cov_z).sum()
    };
    Ok(MetricScore::new(
        MetricId::HScore,
        features,
        value,
        diagnostics,
    ))
}
