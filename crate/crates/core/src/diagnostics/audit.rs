use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::dispersion::rank_dispersion;
use crate::types::{AccuracyTable, BenchmarkManifest};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AuditThresholds {
    /// Largest tolerated params ratio between members of one family.
    pub hierarchy_ratio: f64,
    /// Largest tolerated params ratio across the whole pool.
    pub budget_ratio: f64,
    /// A dataset whose worst model exceeds this accuracy is saturated.
    pub headroom_max: f64,
    pub min_domains: usize,
    /// Flag when one model wins at least this share of datasets.
    pub max_top1_concentration: f64,
}

impl Default for AuditThresholds {
    fn default() -> Self {
        Self {
            hierarchy_ratio: 1.5,
            budget_ratio: 3.0,
            headroom_max: 0.99,
            min_domains: 2,
            max_top1_concentration: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Flag,
    Insufficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub verdict: Verdict,
    pub evidence: String,
}

impl CheckResult {
    fn new(verdict: Verdict, evidence: impl Into<String>) -> Self {
        Self {
            verdict,
            evidence: evidence.into(),
        }
    }

    fn insufficient(what: &str) -> Self {
        Self::new(
            Verdict::Insufficient,
            format!("insufficient metadata: {what}"),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionSummary {
    pub top1_concentration: Option<f64>,
    pub mean_pairwise_tau: Option<f64>,
}

/// One verdict per benchmark-construction check plus the dispersion statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub family_hierarchy: CheckResult,
    pub budget_match: CheckResult,
    pub headroom: CheckResult,
    pub domain_variety: CheckResult,
    pub rank_dispersion: CheckResult,
    pub dispersion: DispersionSummary,
}

impl AuditReport {
    pub fn checks(&self) -> [(&'static str, &CheckResult); 5] {
        [
            ("family_hierarchy", &self.family_hierarchy),
            ("budget_match", &self.budget_match),
            ("headroom", &self.headroom),
            ("domain_variety", &self.domain_variety),
            ("rank_dispersion", &self.rank_dispersion),
        ]
    }

    pub fn flagged(&self) -> Vec<&'static str> {
        self.checks()
            .iter()
            .filter(|(_, c)| c.verdict == Verdict::Flag)
            .map(|(name, _)| *name)
            .collect()
    }
}

fn family_hierarchy(manifest: &BenchmarkManifest, t: &AuditThresholds) -> CheckResult {
    if manifest.models.iter().any(|m| m.family.trim().is_empty()) {
        return CheckResult::insufficient("model without family");
    }
    let mut families: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for m in &manifest.models {
        families
            .entry(m.family.as_str())
            .or_default()
            .push(m.params_millions);
    }
    let mut offenders = Vec::new();
    for (family, params) in &families {
        if params.len() < 2 {
            continue;
        }
        let max = params.iter().copied().fold(f64::MIN, f64::max);
        let min = params.iter().copied().fold(f64::MAX, f64::min);
        if max / min > t.hierarchy_ratio {
            offenders.push(format!(
                "{family}: {} models spanning {min}M-{max}M params ({:.2}x)",
                params.len(),
                max / min
            ));
        }
    }
    if offenders.is_empty() {
        CheckResult::new(
            Verdict::Pass,
            format!(
                "{} families, none with size variants beyond {}x",
                families.len(),
                t.hierarchy_ratio
            ),
        )
    } else {
        CheckResult::new(Verdict::Flag, offenders.join("; "))
    }
}

fn budget_match(manifest: &BenchmarkManifest, t: &AuditThresholds) -> CheckResult {
    let params = manifest.models.iter().map(|m| m.params_millions);
    let max = params.clone().fold(f64::MIN, f64::max);
    let min = params.fold(f64::MAX, f64::min);
    if manifest.models.is_empty() {
        return CheckResult::insufficient("no models");
    }
    let ratio = max / min;
    let evidence = format!(
        "params range {min}M-{max}M ({ratio:.2}x, limit {}x)",
        t.budget_ratio
    );
    if ratio > t.budget_ratio {
        CheckResult::new(Verdict::Flag, evidence)
    } else {
        CheckResult::new(Verdict::Pass, evidence)
    }
}

fn headroom(manifest: &BenchmarkManifest, acc: &AccuracyTable, t: &AuditThresholds) -> CheckResult {
    let mut saturated = Vec::new();
    let mut seen = 0;
    for d in &manifest.datasets {
        let min = acc
            .for_dataset(&d.dataset_id)
            .values()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min.is_infinite() {
            continue;
        }
        seen += 1;
        if min > t.headroom_max {
            saturated.push(format!("{} (min accuracy {min})", d.dataset_id));
        }
    }
    if seen == 0 {
        return CheckResult::insufficient("no accuracies");
    }
    if saturated.is_empty() {
        CheckResult::new(
            Verdict::Pass,
            format!(
                "every dataset has a model at or below {} accuracy",
                t.headroom_max
            ),
        )
    } else {
        CheckResult::new(
            Verdict::Flag,
            format!("saturated: {}", saturated.join(", ")),
        )
    }
}

fn domain_variety(manifest: &BenchmarkManifest, t: &AuditThresholds) -> CheckResult {
    if manifest.datasets.is_empty()
        || manifest
            .datasets
            .iter()
            .any(|d| d.domain_tag.trim().is_empty())
    {
        return CheckResult::insufficient("dataset without domain tag");
    }
    let domains: BTreeSet<&str> = manifest
        .datasets
        .iter()
        .map(|d| d.domain_tag.as_str())
        .collect();
    let evidence = format!(
        "{} distinct domains: {}",
        domains.len(),
        domains.iter().copied().collect::<Vec<_>>().join(", ")
    );
    if domains.len() < t.min_domains {
        CheckResult::new(Verdict::Flag, evidence)
    } else {
        CheckResult::new(Verdict::Pass, evidence)
    }
}

pub fn audit_benchmark(
    manifest: &BenchmarkManifest,
    acc: &AccuracyTable,
    t: &AuditThresholds,
) -> AuditReport {
    let models = manifest.model_ids();
    let complete: Vec<String> = manifest
        .datasets
        .iter()
        .map(|d| d.dataset_id.clone())
        .filter(|d| models.iter().all(|m| acc.get(m, d).is_ok()))
        .collect();

    let (rank_check, dispersion) = match rank_dispersion(acc, &models, &complete) {
        Ok(disp) => {
            let leader = disp
                .winner_histogram
                .iter()
                .max_by_key(|(_, wins)| **wins)
                .map(|(m, w)| format!("{m} wins {w} of {}", complete.len()))
                .unwrap_or_default();
            let evidence = format!(
                "top1_concentration {:.3} ({leader}), mean pairwise tau {:.3}",
                disp.top1_concentration, disp.mean_pairwise_tau
            );
            let verdict = if disp.top1_concentration >= t.max_top1_concentration {
                Verdict::Flag
            } else {
                Verdict::Pass
            };
            (
                CheckResult::new(verdict, evidence),
                DispersionSummary {
                    top1_concentration: Some(disp.top1_concentration),
                    mean_pairwise_tau: Some(disp.mean_pairwise_tau),
                },
            )
        }
        Err(e) => (
            CheckResult::insufficient(&e.to_string()),
            DispersionSummary {
                top1_concentration: None,
                mean_pairwise_tau: None,
            },
        ),
    };

    AuditReport {
        family_hierarchy: family_hierarchy(manifest, t),
        budget_match: budget_match(manifest, t),
        headroom: headroom(manifest, acc, t),
        domain_variety: domain_variety(manifest, t),
        rank_dispersion: rank_check,
        dispersion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{DatasetRecord, ModelRecord};
    use alloc::vec;

    fn manifest(models: Vec<ModelRecord>, datasets: Vec<DatasetRecord>) -> BenchmarkManifest {
        BenchmarkManifest {
            version: 1,
            models,
            datasets,
            features: vec![],
            accuracies: AccuracyTable::new(),
        }
    }

    #[test]
    fn saturated_dataset_flags_headroom() {
        let m = manifest(
            vec![
                ModelRecord::new("a", "x", 10.0),
                ModelRecord::new("b", "y", 11.0),
            ],
            vec![
                DatasetRecord::new("easy", 10, "digits"),
                DatasetRecord::new("hard", 10, "texture"),
            ],
        );
        let mut acc = AccuracyTable::new();
        acc.insert("a", "easy", 0.995).unwrap();
        acc.insert("b", "easy", 0.997).unwrap();
        acc.insert("a", "hard", 0.6).unwrap();
        acc.insert("b", "hard", 0.7).unwrap();
        let r = audit_benchmark(&m, &acc, &AuditThresholds::default());
        assert_eq!(r.headroom.verdict, Verdict::Flag);
        assert!(r.headroom.evidence.contains("easy"));
        assert_eq!(r.budget_match.verdict, Verdict::Pass);
    }

    #[test]
    fn missing_metadata_is_insufficient() {
        let m = manifest(
            vec![
                ModelRecord::new("a", "", 10.0),
                ModelRecord::new("b", "y", 11.0),
            ],
            vec![DatasetRecord::new("d", 10, "")],
        );
        let r = audit_benchmark(&m, &AccuracyTable::new(), &AuditThresholds::default());
        assert_eq!(r.family_hierarchy.verdict, Verdict::Insufficient);
        assert_eq!(r.domain_variety.verdict, Verdict::Insufficient);
        assert_eq!(r.headroom.verdict, Verdict::Insufficient);
        assert_eq!(r.rank_dispersion.verdict, Verdict::Insufficient);
        assert_eq!(r.dispersion.top1_concentration, None);
    }
}
