//! The six feature-based transferability scores behind one interface.
//!
//! Every score is a pure function of `(features, labels, config)`; larger is
//! better. Iterative scores report iteration counts and convergence in
//! [`Diagnostics`].

mod gbc;
mod hscore;
mod logme;
mod nleep;
mod sfda;
mod transrate;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{check_aligned, FeatureMatrix, LabelVector, MetricId};

pub use gbc::{bhattacharyya_diagonal, gbc, GbcOptions};
pub use hscore::{hscore, HScoreOptions};
pub use logme::{logme, LogMeOptions};
pub use nleep::{nleep, NleepOptions};
pub use sfda::{sfda, SfdaOptions};
pub use transrate::{coding_rate, transrate, TransRateOptions};

/// Metric selection plus its numeric options, serialized as
/// `{"metric": "<id>", ...options}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "lowercase")]
pub enum MetricConfig {
    HScore(HScoreOptions),
    LogMe(LogMeOptions),
    Nleep(NleepOptions),
    TransRate(TransRateOptions),
    Gbc(GbcOptions),
    Sfda(SfdaOptions),
}

impl MetricConfig {
    /// Default options for a feature metric; `None` for [`MetricId::Static`].
    pub fn default_for(id: MetricId) -> Option<Self> {
        Some(match id {
            MetricId::HScore => MetricConfig::HScore(HScoreOptions::default()),
            MetricId::LogMe => MetricConfig::LogMe(LogMeOptions::default()),
            MetricId::Nleep => MetricConfig::Nleep(NleepOptions::default()),
            MetricId::TransRate => MetricConfig::TransRate(TransRateOptions::default()),
            MetricId::Gbc => MetricConfig::Gbc(GbcOptions::default()),
            MetricId::Sfda => MetricConfig::Sfda(SfdaOptions::default()),
            MetricId::Static => return None,
        })
    }

    pub fn id(&self) -> MetricId {
        match self {
            MetricConfig::HScore(_) => MetricId::HScore,
            MetricConfig::LogMe(_) => MetricId::LogMe,
            MetricConfig::Nleep(_) => MetricId::Nleep,
            MetricConfig::TransRate(_) => MetricId::TransRate,
            MetricConfig::Gbc(_) => MetricId::Gbc,
            MetricConfig::Sfda(_) => MetricId::Sfda,
        }
    }

    /// Replaces the RNG seed of seeded metrics (NLEEP, SFDA).
    pub fn with_seed(mut self, seed: u64) -> Self {
        match &mut self {
            MetricConfig::Nleep(o) => o.seed = seed,
            MetricConfig::Sfda(o) => o.seed = seed,
            _ => {}
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MetricConfig::HScore(o) => positive("rel_cutoff", o.rel_cutoff),
            MetricConfig::LogMe(o) => {
                at_least_one("max_iter", o.max_iter)?;
                positive("tol", o.tol)
            }
            MetricConfig::Nleep(o) => {
                if !(o.variance_retained > 0.0 && o.variance_retained <= 1.0) {
                    return Err(invalid("variance_retained", "must lie in (0, 1]"));
                }
                if o.components == Some(0) {
                    return Err(invalid("components", "must be at least 1"));
                }
                at_least_one("max_iter", o.max_iter)?;
                positive("tol", o.tol)?;
                positive("covariance_floor", o.covariance_floor)
            }
            MetricConfig::TransRate(o) => positive("epsilon", o.epsilon),
            MetricConfig::Gbc(o) => {
                if o.pca_dims == Some(0) {
                    return Err(invalid("pca_dims", "must be at least 1"));
                }
                positive("variance_floor", o.variance_floor)
            }
            MetricConfig::Sfda(o) => {
                if !(o.shrinkage.is_finite() && o.shrinkage >= 0.0) {
                    return Err(invalid("shrinkage", "must be finite and non-negative"));
                }
                match o.noise_std {
                    Some(s) => positive("noise_std", s),
                    None => Ok(()),
                }
            }
        }
    }
}

fn invalid(field: &'static str, reason: &str) -> Error {
    Error::Invalid {
        field,
        reason: reason.to_string(),
    }
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Invalid {
            field,
            reason: format!("{v} must be finite and > 0"),
        })
    }
}

fn at_least_one(field: &'static str, v: usize) -> Result<()> {
    if v >= 1 {
        Ok(())
    } else {
        Err(invalid(field, "must be at least 1"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFit {
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub retained_variance: Option<f64>,
    pub components: Option<usize>,
    pub per_class: Vec<ClassFit>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricScore {
    pub metric: MetricId,
    pub model_id: String,
    pub dataset_id: String,
    pub value: f64,
    pub diagnostics: Diagnostics,
}

impl MetricScore {
    pub(crate) fn new(
        metric: MetricId,
        features: &FeatureMatrix,
        value: f64,
        diagnostics: Diagnostics,
    ) -> Self {
        Self {
            metric,
            model_id: features.model_id.clone(),
            dataset_id: features.dataset_id.clone(),
            value,
            diagnostics,
        }
    }

    /// `false` only when an iterative metric stopped at its iteration cap.
    pub fn converged(&self) -> bool {
        self.diagnostics.converged.unwrap_or(true)
    }
}

/// Scores one (model, dataset) pair with the configured metric.
pub fn score(
    features: &FeatureMatrix,
    labels: &LabelVector,
    cfg: &MetricConfig,
) -> Result<MetricScore> {
    cfg.validate()?;
    let out = match cfg {
        MetricConfig::HScore(o) => hscore(features, labels, o)?,
        MetricConfig::LogMe(o) => logme(features, labels, o)?,
        MetricConfig::Nleep(o) => nleep(features, labels, o)?,
        MetricConfig::TransRate(o) => transrate(features, labels, o)?,
        MetricConfig::Gbc(o) => gbc(features, labels, o)?,
        MetricConfig::Sfda(o) => sfda(features, labels, o)?,
    };
    if !out.value.is_finite() {
        return Err(Error::Invalid {
            field: "score",
            reason: format!("{} produced a non-finite value", cfg.id()),
        });
    }
    Ok(out)
}

/// Shared precondition for all metrics.
pub(crate) fn check_inputs(features: &FeatureMatrix, labels: &LabelVector) -> Result<()> {
    check_aligned(features, labels)
}

/// Per-class row indices.
pub(crate) fn class_rows(labels: &[u32], num_classes: usize) -> Vec<Vec<usize>> {
    let mut rows = alloc::vec![Vec::new(); num_classes];
    for (i, &l) in labels.iter().enumerate() {
        rows[l as usize].push(i);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_validate() {
        for id in MetricId::FEATURE_METRICS {
            let cfg = MetricConfig::default_for(id).unwrap();
            assert_eq!(cfg.id(), id);
            cfg.validate().unwrap();
        }
        assert!(MetricConfig::default_for(MetricId::Static).is_none());
    }

    #[test]
    fn config_rejects_out_of_range() {
        let bad = MetricConfig::TransRate(TransRateOptions { epsilon: 0.0 });
        assert!(bad.validate().is_err());
        let bad = MetricConfig::LogMe(LogMeOptions {
            max_iter: 0,
            ..Default::default()
        });
        assert!(bad.validate().is_err());
        let bad = MetricConfig::Nleep(NleepOptions {
            variance_retained: 1.5,
            ..Default::default()
        });
        assert!(bad.validate().is_err());
    }
}
