//! Run configuration for the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use site_core::diagnostics::{order_by_params, AblationPlan, AuditThresholds, StaticOrder};
use site_core::types::MetricId;
use site_core::{BenchmarkManifest, MetricConfig};

use crate::error::{Error, Result};
use crate::fsio;

pub const DATA_ROOT_ENV: &str = "SITE_DATA_ROOT";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Relative to the config file. Falls back to `SITE_DATA_ROOT`, then the config directory.
    #[serde(default)]
    pub data_root: Option<PathBuf>,
    /// Relative to the data root.
    #[serde(default = "default_manifest")]
    pub manifest: PathBuf,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<MetricConfig>,
    #[serde(default)]
    pub static_order: Option<StaticOrder>,
    #[serde(default)]
    pub ablation_plan: Option<AblationPlan>,
    #[serde(default)]
    pub audit_thresholds: AuditThresholds,
    /// Relative to the config file.
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Scores consumed by `evaluate`, `ablate` and `fidelity`; defaults to `<output_dir>/scores.csv`.
    #[serde(default)]
    pub scores: Option<PathBuf>,
}

fn default_manifest() -> PathBuf {
    PathBuf::from("manifest.json")
}

fn default_metrics() -> Vec<MetricConfig> {
    MetricId::FEATURE_METRICS
        .iter()
        .filter_map(|&m| MetricConfig::default_for(m))
        .collect()
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("site-out")
}

fn default_seed() -> u64 {
    42
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data_root: None,
            manifest: default_manifest(),
            metrics: default_metrics(),
            static_order: None,
            ablation_plan: None,
            audit_thresholds: AuditThresholds::default(),
            output_dir: default_output_dir(),
            seed: default_seed(),
            scores: None,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = Vec::new();
        for m in &self.metrics {
            m.validate()?;
            if seen.contains(&m.id()) {
                return Err(Error::Config(format!("metric {} configured twice", m.id())));
            }
            seen.push(m.id());
        }
        Ok(())
    }

    /// Metric configs with the run seed applied.
    pub fn metric_configs(&self) -> Vec<MetricConfig> {
        self.metrics
            .iter()
            .map(|m| m.clone().with_seed(self.seed))
            .collect()
    }

    /// The configured order, else the standard order when it covers the pool,
    /// else models by descending parameter count.
    pub fn static_order_for(&self, manifest: &BenchmarkManifest) -> StaticOrder {
        if let Some(order) = &self.static_order {
            return order.clone();
        }
        let standard = StaticOrder::standard();
        if manifest
            .models
            .iter()
            .all(|m| standard.models().contains(&m.model_id))
        {
            standard
        } else {
            order_by_params(&manifest.models)
        }
    }

    /// The configured plan, else the standard plan when it applies to the pool, else no removals.
    pub fn ablation_plan_for(&self, manifest: &BenchmarkManifest) -> AblationPlan {
        if let Some(plan) = &self.ablation_plan {
            return plan.clone();
        }
        let standard = AblationPlan::standard();
        if standard.validate(&manifest.model_ids()).is_ok() {
            standard
        } else {
            AblationPlan::new(Vec::new())
        }
    }
}

/// A config with every path made concrete.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub data_root: PathBuf,
    pub manifest: PathBuf,
    pub output_dir: PathBuf,
    pub scores: PathBuf,
}

fn under(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl Resolved {
    /// Data root precedence: `cli_root`, the config's `data_root`, `env_root`, the config directory.
    pub fn new(
        config: RunConfig,
        config_dir: &Path,
        cli_root: Option<&Path>,
        env_root: Option<&Path>,
    ) -> Self {
        let data_root = match (cli_root, &config.data_root, env_root) {
            (Some(p), _, _) => p.to_path_buf(),
            (None, Some(p), _) => under(config_dir, p),
            (None, None, Some(p)) => p.to_path_buf(),
            (None, None, None) => config_dir.to_path_buf(),
        };
        let manifest = under(&data_root, &config.manifest);
        let output_dir = under(config_dir, &config.output_dir);
        let scores = match &config.scores {
            Some(p) => under(config_dir, p),
            None => output_dir.join("scores.csv"),
        };
        Self {
            config,
            data_root,
            manifest,
            output_dir,
            scores,
        }
    }

    pub fn load(path: &Path, cli_root: Option<&Path>) -> Result<Self> {
        let bytes = fsio::read(path)?;
        let text = String::from_utf8(bytes)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let config = RunConfig::parse(&text, path)?;
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let env = std::env::var_os(DATA_ROOT_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from);
        Ok(Self::new(config, &dir, cli_root, env.as_deref()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = RunConfig::parse("{}", Path::new("c.json")).unwrap();
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.metrics.len(), 6);
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn unknown_metric_is_rejected() {
        let e = RunConfig::parse(r#"{"metrics":[{"metric":"leep"}]}"#, Path::new("c.json"))
            .unwrap_err();
        assert!(e.to_string().contains("leep"), "{e}");
    }

    #[test]
    fn metric_options_parse() {
        let cfg = RunConfig::parse(
            r#"{"metrics":[{"metric":"transrate","epsilon":0.5},{"metric":"gbc","pca_dims":64}],"seed":7}"#,
            Path::new("c.json"),
        )
        .unwrap();
        assert_eq!(cfg.metric_configs().len(), 2);
        assert!(RunConfig::parse(
            r#"{"metrics":[{"metric":"gbc"},{"metric":"gbc"}]}"#,
            Path::new("c.json")
        )
        .is_err());
    }

    #[test]
    fn data_root_precedence() {
        let cfg = RunConfig {
            data_root: Some(PathBuf::from("data")),
            ..RunConfig::default()
        };
        let dir = Path::new("/cfg");
        let r = Resolved::new(
            cfg.clone(),
            dir,
            Some(Path::new("/cli")),
            Some(Path::new("/env")),
        );
        assert_eq!(r.data_root, Path::new("/cli"));
        let r = Resolved::new(cfg, dir, None, Some(Path::new("/env")));
        assert_eq!(r.data_root, Path::new("/cfg/data"));
        assert_eq!(r.manifest, Path::new("/cfg/data/manifest.json"));
        let r = Resolved::new(RunConfig::default(), dir, None, Some(Path::new("/env")));
        assert_eq!(r.data_root, Path::new("/env"));
        let r = Resolved::new(RunConfig::default(), dir, None, None);
        assert_eq!(r.data_root, Path::new("/cfg"));
        assert_eq!(r.scores, Path::new("/cfg/site-out/scores.csv"));
    }
}
