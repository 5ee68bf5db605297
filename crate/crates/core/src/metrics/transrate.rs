use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{check_inputs, class_rows, Diagnostics, MetricScore};
use crate::error::{Error, Result};
use crate::linalg::{centered, logdet_spd, to_matrix};
use crate::types::{FeatureMatrix, LabelVector, MetricId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TransRateOptions {
    /// Distortion in the coding rate.
    pub epsilon: f64,
}

impl Default for TransRateOptions {
    fn default() -> Self {
        Self { epsilon: 1.0 }
    }
}

/// Coding rate `1/2 logdet(I_d + d/(n eps^2) Z^T Z)` of the rows of `z`.
///
/// Uses the `n x n` Gram form when `n < d`; both have the same determinant.
pub fn coding_rate(z: &DMatrix<f64>, epsilon: f64) -> Result<f64> {
    let (n, d) = z.shape();
    if n == 0 {
        return Ok(0.0);
    }
    let k = d as f64 / (n as f64 * epsilon * epsilon);
    let mut a = if d <= n {
        z.tr_mul(z)
    } else {
        z * z.transpose()
    };
    a *= k;
    for i in 0..a.nrows() {
        a[(i, i)] += 1.0;
    }
    let logdet = logdet_spd(&a).ok_or_else(|| Error::Invalid {
        field: "features",
        reason: alloc::string::String::from("coding-rate matrix is not positive definite"),
    })?;
    Ok(0.5 * logdet)
}

/// `R(Z) - sum_c (n_c/n) R(Z_c)` on globally centered features, each class
/// re-centered on its own mean.
pub fn transrate(
    features: &FeatureMatrix,
    labels: &LabelVector,
    opts: &TransRateOptions,
) -> Result<MetricScore> {
    check_inputs(features, labels)?;
    let z = centered(&to_matrix(features, None));
    let n = z.nrows() as f64;
    let total = coding_rate(&z, opts.epsilon)?;
    let mut conditional = 0.0;
    for rows in class_rows(labels.labels(), labels.num_classes()) {
        let zc = centered(&z.select_rows(rows.iter()));
        conditional += rows.len() as f64 / n * coding_rate(&zc, opts.epsilon)?;
    }
    Ok(MetricScore::new(
        MetricId::TransRate,
        features,
        total - conditional,
        Diagnostics::default(),
    ))
}
