use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use libm::log;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{check_inputs, class_rows, Diagnostics, MetricScore};
use crate::error::{Error, Result};
use crate::linalg::{column_means, log_sum_exp, symmetrize, to_matrix, SortedEigen};
use crate::types::{FeatureMatrix, LabelVector, MetricId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SfdaOptions {
    /// Ridge on the within-class scatter, in units of `trace(S_w) / d`.
    pub shrinkage: f64,
    /// When set, the discriminant is fitted on a copy of the features perturbed
    /// by Gaussian noise of this standard deviation and evaluated on the clean ones.
    pub noise_std: Option<f64>,
    pub seed: u64,
}

impl Default for SfdaOptions {
    fn default() -> Self {
        Self {
            shrinkage: 1.0,
            noise_std: None,
            seed: 42,
        }
    }
}

struct Discriminant {
    /// `d x k` projection, whitened w.r.t. the regularized within-class scatter.
    projection: DMatrix<f64>,
    /// Regularized within-class covariance in the projected space.
    shared_cov: DMatrix<f64>,
    class_means: Vec<DVector<f64>>,
    log_priors: Vec<f64>,
    ridge_bumps: usize,
}

impl Discriminant {
    fn fit(x: &DMatrix<f64>, labels: &[u32], classes: usize, shrinkage: f64) -> Result<Self> {
        let (n, d) = x.shape();
        let rows = class_rows(labels, classes);
        let mu = column_means(x);
        let means: Vec<DVector<f64>> = rows
            .iter()
            .map(|r| column_means(&x.select_rows(r.iter())))
            .collect();

        let mut within = DMatrix::zeros(x.nrows(), d);
        for (i, &l) in labels.iter().enumerate() {
            within.set_row(i, &(x.row(i) - means[l as usize].transpose()));
        }
        let mut s_w = within.tr_mul(&within) / n as f64;
        symmetrize(&mut s_w);
        let mut s_b = DMatrix::zeros(d, d);
        for (m, r) in means.iter().zip(&rows) {
            let diff = m - &mu;
            s_b += (&diff * diff.transpose()) * (r.len() as f64 / n as f64);
        }
        symmetrize(&mut s_b);

        let scale = s_w.trace() / d as f64;
        let reference = ((s_w.trace() + s_b.trace()) / d as f64).max(1.0);
        let mut ridge = shrinkage * scale;
        let mut ridge_bumps = 0;
        let chol = loop {
            let mut reg = s_w.clone();
            for i in 0..d {
                reg[(i, i)] += ridge;
            }
            if let Some(c) = reg.cholesky() {
                break c;
            }
            ridge = (ridge * 10.0).max(1e-12 * reference);
            ridge_bumps += 1;
            if ridge_bumps > 64 {
                return Err(Error::Invalid {
                    field: "features",
                    reason: String::from("within-class scatter could not be regularized"),
                });
            }
        };

        // generalized eigenproblem S_b v = lambda (S_w + ridge I) v via L^-1 S_b L^-T
        let l = chol.l();
        let l_inv = l
            .clone()
            .try_inverse()
            .expect("cholesky factor of a positive definite matrix is invertible");
        let mut whitened = &l_inv * &s_b * l_inv.transpose();
        symmetrize(&mut whitened);
        let eig = SortedEigen::new(&whitened);
        let k = (classes - 1).min(d);
        let projection = l_inv.transpose() * eig.vectors.columns(0, k);

        let mut reg_w = s_w;
        for i in 0..d {
            reg_w[(i, i)] += ridge;
        }
        let mut shared_cov = projection.transpose() * reg_w * &projection;
        symmetrize(&mut shared_cov);

        let class_means = means.iter().map(|m| projection.tr_mul(m)).collect();
        let log_priors = rows
            .iter()
            .map(|r| log(r.len() as f64 / n as f64))
            .collect();
        Ok(Self {
            projection,
            shared_cov,
            class_means,
            log_priors,
            ridge_bumps,
        })
    }

    /// Mean log posterior of the true class under the shared-covariance Gaussian model.
    fn mean_log_posterior(&self, x: &DMatrix<f64>, labels: &[u32]) -> Result<f64> {
        let precision = self
            .shared_cov
            .clone()
            .cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| Error::Invalid {
                field: "features",
                reason: String::from("projected covariance is singular"),
            })?;
        let projected = x * &self.projection;
        let mut total = 0.0;
        let mut logits = alloc::vec![0.0; self.class_means.len()];
        for (i, &l) in labels.iter().enumerate() {
            let p = projected.row(i).transpose();
            for (c, m) in self.class_means.iter().enumerate() {
                let diff = &p - m;
                logits[c] = self.log_priors[c] - 0.5 * diff.dot(&(&precision * &diff));
            }
            total += logits[l as usize] - log_sum_exp(&logits);
        }
        Ok(total / labels.len() as f64)
    }
}

/// Regularized Fisher projection followed by the mean log posterior of the
/// true label under class-conditional Gaussians with shared covariance.
pub fn sfda(
    features: &FeatureMatrix,
    labels: &LabelVector,
    opts: &SfdaOptions,
) -> Result<MetricScore> {
    check_inputs(features, labels)?;
    let classes = labels.num_classes();
    let mut diagnostics = Diagnostics::default();

    let (x, y): (DMatrix<f64>, Vec<u32>) = match opts.noise_std {
        None => (to_matrix(features, None), labels.labels().to_vec()),
        Some(_) => {
            let order = features.canonical_row_order();
            let y = order.iter().map(|&i| labels.labels()[i]).collect();
            (to_matrix(features, Some(&order)), y)
        }
    };
    let fit_on = match opts.noise_std {
        None => None,
        Some(std) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut noisy = x.clone();
            for v in noisy.iter_mut() {
                let z: f64 = StandardNormal.sample(&mut rng);
                *v += std * z;
            }
            diagnostics.notes.push(format!(
                "discriminant fitted on noise-perturbed features (std {std})"
            ));
            Some(noisy)
        }
    };

    let model = Discriminant::fit(fit_on.as_ref().unwrap_or(&x), &y, classes, opts.shrinkage)?;
    if model.ridge_bumps > 0 {
        diagnostics.notes.push(format!(
            "within-class scatter singular; ridge raised {} times",
            model.ridge_bumps
        ));
    }
    diagnostics.components = Some(model.projection.ncols());
    let value = model.mean_log_posterior(&x, &y)?.min(0.0);
    Ok(MetricScore::new(
        MetricId::Sfda,
        features,
        value,
        diagnostics,
    ))
}
