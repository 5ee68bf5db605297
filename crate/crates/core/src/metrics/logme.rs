use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::log;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_inputs, ClassFit, Diagnostics, MetricScore};
use crate::error::Result;
use crate::linalg::to_matrix;
use crate::types::{FeatureMatrix, LabelVector, MetricId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogMeOptions {
    pub max_iter: usize,
    /// Stop once the (unnormalized) log evidence changes by less than this.
    pub tol: f64,
}

impl Default for LogMeOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol: 1e-3,
        }
    }
}

/// Singular spectrum of the feature matrix, shared by all one-vs-rest targets.
struct Spectrum {
    n: usize,
    d: usize,
    singular: Vec<f64>,
    u: DMatrix<f64>,
}

struct Evaluation {
    evidence: f64,
    gamma: f64,
    weight_norm2: f64,
    residual2: f64,
}

/// Target projected on the left singular vectors plus the part of `y` outside their span.
struct Target {
    proj: Vec<f64>,
    outside2: f64,
}

impl Spectrum {
    fn new(x: DMatrix<f64>) -> Self {
        let (n, d) = x.shape();
        let svd = x.svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        Self {
            n,
            d,
            singular: svd.singular_values.iter().copied().collect(),
            u,
        }
    }

    fn target(&self, y: &DVector<f64>) -> Target {
        let proj: Vec<f64> = self.u.tr_mul(y).iter().copied().collect();
        let captured: f64 = proj.iter().map(|p| p * p).sum();
        Target {
            outside2: (y.norm_squared() - captured).max(0.0),
            proj,
        }
    }

    /// Log evidence of Bayesian linear regression at prior precision `alpha`
    /// and noise precision `beta`, with the weights at their posterior mean.
    fn evaluate(&self, t: &Target, alpha: f64, beta: f64) -> Evaluation {
        let (n, d) = (self.n as f64, self.d as f64);
        let mut gamma = 0.0;
        let mut weight_norm2 = 0.0;
        let mut residual2 = t.outside2;
        let mut logdet = 0.0;
        for (&s, &p) in self.singular.iter().zip(&t.proj) {
            let s2 = s * s;
            let denom = alpha + beta * s2;
            let w = beta * s * p / denom;
            weight_norm2 += w * w;
            gamma += beta * s2 / denom;
            let r = p - s * w;
            residual2 += r * r;
            logdet += log(denom);
        }
        logdet += (self.d - self.singular.len()) as f64 * log(alpha);
        let evidence = 0.5 * n * log(beta) + 0.5 * d * log(alpha)
            - 0.5 * n * log(2.0 * PI)
            - 0.5 * beta * residual2
            - 0.5 * alpha * weight_norm2
            - 0.5 * logdet;
        Evaluation {
            evidence,
            gamma,
            weight_norm2,
            residual2,
        }
    }

    /// Fixed-point evidence maximization; returns the best evidence seen.
    fn maximize(&self, t: &Target, opts: &LogMeOptions) -> (f64, ClassFit) {
        let n = self.n as f64;
        let residual_floor =
            1e-12 * (t.proj.iter().map(|p| p * p).sum::<f64>() + t.outside2).max(1.0);
        let (mut alpha, mut beta) = (1.0, 1.0);
        let mut current = self.evaluate(t, alpha, beta);
        let mut best = current.evidence;
        let mut fit = ClassFit {
            iterations: opts.max_iter,
            converged: false,
        };
        for it in 1..=opts.max_iter {
            // with no signal the evidence does not depend on alpha
            let next_alpha = current.gamma / current.weight_norm2;
            if next_alpha.is_finite() && next_alpha > 0.0 {
                alpha = next_alpha;
            }
            beta = (n - current.gamma) / current.residual2.max(residual_floor);
            let next = self.evaluate(t, alpha, beta);
            if next.evidence > best {
                best = next.evidence;
            }
            let change = (next.evidence - current.evidence).abs();
            current = next;
            if change < opts.tol {
                fit = ClassFit {
                    iterations: it,
                    converged: true,
                };
                break;
            }
        }
        (best, fit)
    }
}

/// Mean over classes of the per-sample maximized log evidence of a Bayesian
/// linear model regressing the 0/1 one-vs-rest indicator on the features.
pub fn logme(
    features: &FeatureMatrix,
    labels: &LabelVector,
    opts: &LogMeOptions,
) -> Result<MetricScore> {
    check_inputs(features, labels)?;
    let spectrum = Spectrum::new(to_matrix(features, None));
    let n = spectrum.n as f64;
    let classes = labels.num_classes();
    let mut total = 0.0;
    let mut diagnostics = Diagnostics::default();
    for k in 0..classes {
        let y = DVector::from_iterator(
            spectrum.n,
            labels
                .labels()
                .iter()
                .map(|&l| if l as usize == k { 1.0 } else { 0.0 }),
        );
        let target = spectrum.target(&y);
        let (evidence, fit) = spectrum.maximize(&target, opts);
        total += evidence / n;
        diagnostics.per_class.push(fit);
    }
    diagnostics.iterations = diagnostics.per_class.iter().map(|f| f.iterations).max();
    diagnostics.converged = Some(diagnostics.per_class.iter().all(|f| f.converged));
    Ok(MetricScore::new(
        MetricId::LogMe,
        features,
        total / classes as f64,
        diagnostics,
    ))
}
