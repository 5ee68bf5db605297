use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{exp, log};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_inputs, Diagnostics, MetricScore};
use crate::error::Result;
use crate::linalg::{log_sum_exp, pca_retaining, to_matrix};
use crate::types::{FeatureMatrix, LabelVector, MetricId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NleepOptions {
    /// Fraction of variance kept by the PCA step.
    pub variance_retained: f64,
    /// Mixture size; defaults to `min(5 * classes, n / 10)`.
    pub components: Option<usize>,
    pub max_iter: usize,
    /// Tolerance on the change in mean log-likelihood between EM steps.
    pub tol: f64,
    pub covariance_floor: f64,
    pub seed: u64,
}

impl Default for NleepOptions {
    fn default() -> Self {
        Self {
            variance_retained: 0.8,
            components: None,
            max_iter: 100,
            tol: 1e-4,
            covariance_floor: 1e-6,
            seed: 42,
        }
    }
}

/// Components whose soft count falls below this are dropped.
const MIN_COMPONENT_MASS: f64 = 1e-8;

struct Mixture {
    weights: Vec<f64>,
    means: Vec<Vec<f64>>,
    vars: Vec<Vec<f64>>,
}

struct MixtureFit {
    responsibilities: DMatrix<f64>,
    iterations: usize,
    converged: bool,
    pruned: usize,
}

impl Mixture {
    /// k-means++ style seeding: first center uniform, then proportional to squared
    /// distance to the nearest chosen center. Variances start at the global variance.
    fn seed(x: &DMatrix<f64>, k: usize, floor: f64, rng: &mut ChaCha8Rng) -> Self {
        let (n, d) = x.shape();
        let dist2 = |i: usize, c: &[f64]| -> f64 {
            (0..d)
                .map(|j| (x[(i, j)] - c[j]) * (x[(i, j)] - c[j]))
                .sum()
        };
        let row = |i: usize| -> Vec<f64> { (0..d).map(|j| x[(i, j)]).collect() };

        let mut means = alloc::vec![row(rng.random_range(0..n))];
        let mut nearest: Vec<f64> = (0..n).map(|i| dist2(i, &means[0])).collect();
        while means.len() < k {
            let total: f64 = nearest.iter().sum();
            let pick = if total > 0.0 {
                let target = rng.random::<f64>() * total;
                let mut acc = 0.0;
                nearest
                    .iter()
                    .position(|&w| {
                        acc += w;
                        acc > target
                    })
                    .unwrap_or(n - 1)
            } else {
                rng.random_range(0..n)
            };
            let c = row(pick);
            for (i, w) in nearest.iter_mut().enumerate() {
                *w = w.min(dist2(i, &c));
            }
            means.push(c);
        }

        let mut global = alloc::vec![0.0; d];
        for j in 0..d {
            let col = x.column(j);
            let mean = col.sum() / n as f64;
            global[j] =
                (col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64).max(floor);
        }
        Self {
            weights: alloc::vec![1.0 / k as f64; k],
            vars: alloc::vec![global; k],
            means,
        }
    }

    /// Fills `resp` with posterior responsibilities; returns the mean log-likelihood.
    fn expectation(&self, x: &DMatrix<f64>, resp: &mut DMatrix<f64>) -> f64 {
        let (n, d) = x.shape();
        let k = self.weights.len();
        let norms: Vec<f64> = (0..k)
            .map(|z| {
                log(self.weights[z])
                    - 0.5 * self.vars[z].iter().map(|v| log(2.0 * PI * v)).sum::<f64>()
            })
            .collect();
        let mut logp = alloc::vec![0.0; k];
        let mut ll = 0.0;
        for i in 0..n {
            for z in 0..k {
                let mut q = 0.0;
                for j in 0..d {
                    let diff = x[(i, j)] - self.means[z][j];
                    q += diff * diff / self.vars[z][j];
                }
                logp[z] = norms[z] - 0.5 * q;
            }
            let lse = log_sum_exp(&logp);
            ll += lse;
            for z in 0..k {
                resp[(i, z)] = exp(logp[z] - lse);
            }
        }
        ll / n as f64
    }

    /// Re-estimates parameters; components with vanishing mass are removed.
    fn maximization(&mut self, x: &DMatrix<f64>, resp: &DMatrix<f64>, floor: f64) -> usize {
        let (n, d) = x.shape();
        let mut keep = Vec::new();
        for z in 0..self.weights.len() {
            let mass: f64 = resp.column(z).sum();
            if mass < MIN_COMPONENT_MASS {
                continue;
            }
            let mut mean = alloc::vec![0.0; d];
            for i in 0..n {
                let r = resp[(i, z)];
                for j in 0..d {
                    mean[j] += r * x[(i, j)];
                }
            }
            mean.iter_mut().for_each(|m| *m /= mass);
            let mut var = alloc::vec![0.0; d];
            for i in 0..n {
                let r = resp[(i, z)];
                for j in 0..d {
                    let diff = x[(i, j)] - mean[j];
                    var[j] += r * diff * diff;
                }
            }
            var.iter_mut().for_each(|v| *v = (*v / mass).max(floor));
            keep.push((mass / n as f64, mean, var));
        }
        let pruned = self.weights.len() - keep.len();
        self.weights = keep.iter().map(|k| k.0).collect();
        let total: f64 = self.weights.iter().sum();
        self.weights.iter_mut().for_each(|w| *w /= total);
        self.means = keep.iter().map(|k| k.1.clone()).collect();
        self.vars = keep.into_iter().map(|k| k.2).collect();
        pruned
    }

    fn fit(x: &DMatrix<f64>, k: usize, opts: &NleepOptions) -> MixtureFit {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut gmm = Self::seed(x, k, opts.covariance_floor, &mut rng);
        let mut resp = DMatrix::zeros(x.nrows(), k);
        let mut prev = f64::NEG_INFINITY;
        let mut pruned = 0;
        let mut converged = false;
        let mut iterations = 0;
        for it in 1..=opts.max_iter {
            iterations = it;
            if resp.ncols() != gmm.weights.len() {
                resp = DMatrix::zeros(x.nrows(), gmm.weights.len());
            }
            let ll = gmm.expectation(x, &mut resp);
            if (ll - prev).abs() < opts.tol {
                converged = true;
                break;
            }
            prev = ll;
            if it < opts.max_iter {
                pruned += gmm.maximization(x, &resp, opts.covariance_floor);
            }
        }
        MixtureFit {
            responsibilities: resp,
            iterations,
            converged,
            pruned,
        }
    }
}

/// Gaussian-mixture variant of the log expected empirical prediction.
///
/// Mixture responsibilities on PCA-reduced features act as pseudo-source
/// posteriors; the score is the mean log-probability of the true label under
/// the empirical label-given-component distribution.
pub fn nleep(
    features: &FeatureMatrix,
    labels: &LabelVector,
    opts: &NleepOptions,
) -> Result<MetricScore> {
    check_inputs(features, labels)?;
    // walk rows in canonical order so seeding does not depend on row order
    let order = features.canonical_row_order();
    let x = to_matrix(features, Some(&order));
    let y: Vec<usize> = order.iter().map(|&i| labels.labels()[i] as usize).collect();
    let n = x.nrows();
    let classes = labels.num_classes();

    let (z, kept_dims, retained) = pca_retaining(&x, opts.variance_retained);
    let k = opts
        .components
        .unwrap_or_else(|| (5 * classes).min(n / 10))
        .clamp(1, n);
    let fit = Mixture::fit(&z, k, opts);
    let resp = &fit.responsibilities;
    let kz = resp.ncols();

    let mut joint = DMatrix::<f64>::zeros(classes, kz);
    for i in 0..n {
        for c in 0..kz {
            joint[(y[i], c)] += resp[(i, c)];
        }
    }
    joint /= n as f64;
    let mut conditional = joint.clone();
    for c in 0..kz {
        let pz: f64 = joint.column(c).sum();
        if pz > 0.0 {
            conditional.column_mut(c).scale_mut(1.0 / pz);
        }
    }

    let mut total = 0.0;
    for i in 0..n {
        let p: f64 = (0..kz).map(|c| conditional[(y[i], c)] * resp[(i, c)]).sum();
        total += log(p);
    }

    let mut diagnostics = Diagnostics {
        iterations: Some(fit.iterations),
        converged: Some(fit.converged),
        retained_variance: Some(retained),
        components: Some(kz),
        ..Default::default()
    };
    diagnostics.notes.push(format!("pca kept {kept_dims} axes"));
    if fit.pruned > 0 {
        diagnostics.notes.push(format!(
            "pruned {} degenerate mixture components",
            fit.pruned
        ));
    }
    Ok(MetricScore::new(
        MetricId::Nleep,
        features,
        total / n as f64,
        diagnostics,
    ))
}
