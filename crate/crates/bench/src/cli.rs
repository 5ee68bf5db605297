//! The `site` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use site_core::types::MetricId;
use site_core::MetricConfig;

use crate::config::Resolved;
use crate::error::{Error, Issue, Result};
use crate::manifest::Store;
use crate::{pipeline, report, scoring};

#[derive(Debug, Parser)]
#[command(
    name = "site",
    version,
    about = "Score pre-trained models on stored features and audit the benchmark"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Run configuration (JSON).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Overrides the config's data_root and SITE_DATA_ROOT.
    #[arg(long, value_name = "DIR")]
    pub data_root: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the manifest and every feature file.
    Validate(Common),
    /// Score every (metric, model, dataset) triple into scores.csv.
    Score {
        #[command(flatten)]
        common: Common,
        /// Restrict to these metrics (repeatable).
        #[arg(long = "metric", value_name = "ID", value_parser = parse_metric)]
        metrics: Vec<MetricId>,
    },
    /// Summary, ablation, fidelity and scatter reports from scores.csv.
    Evaluate(Common),
    /// Static-ranker scores and their weighted tau per dataset.
    Static(Common),
    /// Ablation sweep for every metric and dataset.
    Ablate(Common),
    /// Correlation of score gaps with accuracy gaps.
    Fidelity(Common),
    /// Benchmark-construction audit (always exits 0).
    Audit(Common),
}

fn parse_metric(s: &str) -> std::result::Result<MetricId, String> {
    match s.parse::<MetricId>() {
        Ok(MetricId::Static) => Err("static is not a feature metric".to_string()),
        Ok(m) => Ok(m),
        Err(e) => Err(e.to_string()),
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Validate(c)
            | Command::Evaluate(c)
            | Command::Static(c)
            | Command::Ablate(c)
            | Command::Fidelity(c)
            | Command::Audit(c) => c,
            Command::Score { common, .. } => common,
        }
    }
}

/// Runs a parsed command, writing human output to `out`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    let common = cli.command.common();
    let resolved = Resolved::load(&common.config, common.data_root.as_deref())?;
    match &cli.command {
        Command::Validate(_) => validate(&resolved, out),
        Command::Score { metrics, .. } => score(&resolved, metrics, out),
        Command::Evaluate(_) => evaluate(&resolved, out),
        Command::Static(_) => static_ranker(&resolved, out),
        Command::Ablate(_) => ablate(&resolved, out),
        Command::Fidelity(_) => fidelity(&resolved, out),
        Command::Audit(_) => audit(&resolved, out),
    }
}

fn say(out: &mut dyn Write, line: impl AsRef<str>) -> Result<()> {
    writeln!(out, "{}", line.as_ref()).map_err(|e| Error::io("<stdout>", e))
}

fn open_store(r: &Resolved) -> Result<Store> {
    Store::open(&r.manifest, Some(&r.data_root))
}

fn validate(r: &Resolved, out: &mut dyn Write) -> Result<u8> {
    let issues: Vec<Issue> = match open_store(r) {
        Ok(store) => store.validate_files(),
        Err(e) => e.issues(),
    };
    let doc = serde_json::json!({ "valid": issues.is_empty(), "issues": issues });
    say(
        out,
        serde_json::to_string_pretty(&doc).expect("issues serialize"),
    )?;
    Ok(if issues.is_empty() { 0 } else { 1 })
}

fn score(r: &Resolved, only: &[MetricId], out: &mut dyn Write) -> Result<u8> {
    let store = open_store(r)?;
    let mut metrics = r.config.metric_configs();
    if !only.is_empty() {
        metrics = only
            .iter()
            .map(|&id| {
                metrics
                    .iter()
                    .find(|m| m.id() == id)
                    .cloned()
                    .or_else(|| MetricConfig::default_for(id).map(|m| m.with_seed(r.config.seed)))
                    .expect("feature metric")
            })
            .collect();
    }
    let run = scoring::score_all(&store, &metrics);
    let scores_path = r.output_dir.join("scores.csv");
    report::write_scores(&scores_path, &run.records)?;
    report::write_failures(&r.output_dir.join("errors.csv"), &run.failures)?;
    say(
        out,
        format!(
            "scored {} triple(s), {} failure(s) -> {}",
            run.records.len(),
            run.failures.len(),
            scores_path.display()
        ),
    )?;
    Ok(if run.records.is_empty() { 1 } else { 0 })
}

fn write_in(dir: &Path, name: &str, out: &mut dyn Write) -> Result<PathBuf> {
    let p = dir.join(name);
    say(out, format!("wrote {}", p.display()))?;
    Ok(p)
}

fn evaluate(r: &Resolved, out: &mut dyn Write) -> Result<u8> {
    let store = open_store(r)?;
    let scores = report::score_table(&r.scores)?;
    let ev = pipeline::evaluate(
        &scores,
        &store.manifest,
        &r.config.static_order_for(&store.manifest),
        &r.config.ablation_plan_for(&store.manifest),
    )?;
    let dir = &r.output_dir;
    report::write_summary(&dir.join("summary.csv"), &ev.summary)?;
    report::write_rows(&dir.join("ablation.csv"), &ev.ablation)?;
    report::write_rows(&dir.join("fidelity.csv"), &ev.fidelity)?;
    for (name, rows) in &ev.scatter {
        report::write_rows(&dir.join(name), rows)?;
    }
    for row in &ev.summary.rows {
        say(
            out,
            format!(
                "{:<10} average tau_w {}",
                row.label,
                report::fmt_rounded(row.average)
            ),
        )?;
    }
    say(
        out,
        format!(
            "wrote summary.csv, ablation.csv, fidelity.csv and {} scatter file(s) to {}",
            ev.scatter.len(),
            dir.display()
        ),
    )?;
    Ok(0)
}

fn static_ranker(r: &Resolved, out: &mut dyn Write) -> Result<u8> {
    let store = open_store(r)?;
    let rep =
        pipeline::static_report(&store.manifest, &r.config.static_order_for(&store.manifest))?;
    report::write_rows(
        &write_in(&r.output_dir, "static_scores.csv", out)?,
        &rep.scores,
    )?;
    report::write_rows(&write_in(&r.output_dir, "static_tau.csv", out)?, &rep.tau)?;
    Ok(0)
}

fn merged_scores(r: &Resolved, store: &Store) -> Result<(site_core::ScoreTable, Vec<MetricId>)> {
    let m = &store.manifest;
    let scores = report::score_table(&r.scores)?;
    let mut metrics = pipeline::scored_metrics(&scores);
    pipeline::require_complete(
        &scores,
        &m.accuracies,
        &metrics,
        &m.model_ids(),
        &m.dataset_ids(),
    )?;
    metrics.push(MetricId::Static);
    Ok((
        pipeline::with_static(&scores, m, &r.config.static_order_for(m))?,
        metrics,
    ))
}

fn ablate(r: &Resolved, out: &mut dyn Write) -> Result<u8> {
    let store = open_store(r)?;
    let (scores, metrics) = merged_scores(r, &store)?;
    let rows = pipeline::ablation_rows(
        &scores,
        &store.manifest,
        &metrics,
        &r.config.ablation_plan_for(&store.manifest),
    )?;
    report::write_rows(&write_in(&r.output_dir, "ablation.csv", out)?, &rows)?;
    Ok(0)
}

fn fidelity(r: &Resolved, out: &mut dyn Write) -> Result<u8> {
    let store = open_store(r)?;
    let (scores, metrics) = merged_scores(r, &store)?;
    let rows = pipeline::fidelity_rows(&scores, &store.manifest, &metrics)?;
    report::write_rows(&write_in(&r.output_dir, "fidelity.csv", out)?, &rows)?;
    Ok(0)
}

fn audit(r: &Resolved, out: &mut dyn Write) -> Result<u8> {
    let store = open_store(r)?;
    let rep = pipeline::audit(&store.manifest, &r.config.audit_thresholds);
    for (name, check) in rep.checks() {
        say(
            out,
            format!(
                "{name:<17} {:<12} {}",
                format!("{:?}", check.verdict).to_lowercase(),
                check.evidence
            ),
        )?;
    }
    report::write_audit(&write_in(&r.output_dir, "audit.json", out)?, &rep)?;
    Ok(0)
}
