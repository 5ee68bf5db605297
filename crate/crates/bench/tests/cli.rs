mod common;

use std::path::Path;
use std::process::{Command, Output};

use site_bench::report::{read_rows, read_scores, AblationRow, FidelityRow, ScatterRow};
use site_core::types::MetricId;

fn site(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_site"))
        .args(args)
        .env_remove("SITE_DATA_ROOT")
        .output()
        .unwrap()
}

fn run(cmd: &str, config: &Path) -> Output {
    site(&[cmd, "--config", config.to_str().unwrap()])
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn two_dataset_bench() -> common::Bench {
    common::build(
        &common::standard_layout(vec![("pets", 3, "fine-grained"), ("dtd", 4, "texture")]),
        common::CONFIG,
    )
}

#[test]
fn validate_accepts_a_clean_store() {
    let b = two_dataset_bench();
    let o = run("validate", &b.config());
    assert!(o.status.success(), "{}", stdout(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["issues"].as_array().unwrap().len(), 0);
}

#[test]
fn validate_reports_bad_magic() {
    let b = two_dataset_bench();
    let path = b.feature_path("resnet50", "dtd");
    let mut bytes = std::fs::read(&path).unwrap();
    bytes[..4].copy_from_slice(b"XXXX");
    std::fs::write(&path, bytes).unwrap();
    let o = run("validate", &b.config());
    assert_eq!(o.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let issues = doc["issues"].as_array().unwrap();
    assert_eq!(issues.len(), 1);
    assert_eq!(issues[0]["code"], "bad_magic");
    assert!(issues[0]["message"]
        .as_str()
        .unwrap()
        .starts_with("bad magic"));
    assert!(issues[0]["path"]
        .as_str()
        .unwrap()
        .ends_with("resnet50__dtd.sitb"));
}

#[test]
fn validate_names_dangling_model() {
    let b = two_dataset_bench();
    b.rewrite_manifest(|m| m.features[0].model = "vgg16".into());
    let o = run("validate", &b.config());
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("unknown model_id \\\"vgg16\\\""),
        "{}",
        stdout(&o)
    );
}

#[test]
fn validate_checks_declared_class_count() {
    let b = two_dataset_bench();
    b.rewrite_manifest(|m| m.datasets[0].num_classes = 5);
    let o = run("validate", &b.config());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).matches("\"code\"").count(), 11, "{}", stdout(&o));
}

#[test]
fn score_writes_every_triple_and_is_reproducible() {
    let b = two_dataset_bench();
    let o = run("score", &b.config());
    assert!(o.status.success(), "{}", stderr(&o));
    let first = std::fs::read(b.out().join("scores.csv")).unwrap();
    let records = read_scores(&b.out().join("scores.csv")).unwrap();
    assert_eq!(records.len(), 6 * 11 * 2);
    assert_eq!(
        std::fs::read_to_string(b.out().join("errors.csv")).unwrap(),
        "metric,model,dataset,error\n"
    );
    assert!(String::from_utf8_lossy(&first).starts_with("metric,model,dataset,score,converged\n"));
    assert!(run("score", &b.config()).status.success());
    assert_eq!(first, std::fs::read(b.out().join("scores.csv")).unwrap());
}

#[test]
fn score_metric_filter_and_usage_error() {
    let b = two_dataset_bench();
    let o = site(&[
        "score",
        "--config",
        b.config().to_str().unwrap(),
        "--metric",
        "gbc",
    ]);
    assert!(o.status.success());
    let records = read_scores(&b.out().join("scores.csv")).unwrap();
    assert_eq!(records.len(), 22);
    assert!(records.iter().all(|r| r.metric == MetricId::Gbc));
    let o = site(&[
        "score",
        "--config",
        b.config().to_str().unwrap(),
        "--metric",
        "leep",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("leep"));
}

#[test]
fn score_tolerates_partial_failure() {
    let b = two_dataset_bench();
    std::fs::write(b.feature_path("mnasnet", "pets"), b"SITB").unwrap();
    let o = run("score", &b.config());
    assert!(o.status.success());
    let errors = std::fs::read_to_string(b.out().join("errors.csv")).unwrap();
    assert_eq!(errors.lines().count(), 1 + 6);
    assert_eq!(
        read_scores(&b.out().join("scores.csv")).unwrap().len(),
        6 * 21
    );
}

#[test]
fn evaluate_emits_all_reports() {
    let b = two_dataset_bench();
    assert!(run("score", &b.config()).status.success());
    let o = run("evaluate", &b.config());
    assert!(o.status.success(), "{}", stderr(&o));

    let summary = std::fs::read_to_string(b.out().join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next(), Some("metric,pets,dtd,Average"));
    let labels: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(
        labels,
        [
            "gbc",
            "transrate",
            "sfda",
            "hscore",
            "nleep",
            "logme",
            "static"
        ]
    );
    for line in summary.lines().skip(1) {
        let cells: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|c| c.parse().unwrap())
            .collect();
        assert!(line
            .split(',')
            .skip(1)
            .all(|c| c.split('.').nth(1).unwrap().len() == 3));
        assert!(((cells[0] + cells[1]) / 2.0 - cells[2]).abs() <= 1e-3);
    }

    let ablation: Vec<AblationRow> = read_rows(&b.out().join("ablation.csv")).unwrap();
    assert_eq!(ablation.len(), 7 * 2 * 5);
    assert_eq!(ablation[0].removed_prefix, "");
    assert_eq!(
        ablation[4].removed_prefix,
        "resnet152|resnet101|densenet169|densenet201"
    );

    let fidelity: Vec<FidelityRow> = read_rows(&b.out().join("fidelity.csv")).unwrap();
    assert_eq!(fidelity.len(), 14);
    assert!(fidelity.iter().all(|r| r.pair_count == 55));

    let scatter: Vec<ScatterRow> = read_rows(&b.out().join("scatter_logme_pets.csv")).unwrap();
    assert_eq!(scatter.len(), 11);
    let scores = read_scores(&b.out().join("scores.csv")).unwrap();
    let r152 = scores
        .iter()
        .find(|r| r.metric == MetricId::LogMe && r.model == "resnet152" && r.dataset == "pets")
        .unwrap();
    assert_eq!(
        scatter
            .iter()
            .find(|s| s.model == "resnet152")
            .unwrap()
            .score,
        r152.score
    );
    assert!(b.out().join("scatter_static_dtd.csv").exists());
}

#[test]
fn evaluate_requires_complete_tables() {
    let b = two_dataset_bench();
    assert!(run("evaluate", &b.config()).status.code() == Some(1));
    assert!(run("score", &b.config()).status.success());
    b.rewrite_manifest(|m| {
        let mut acc = site_core::AccuracyTable::new();
        for (model, dataset, a) in m.accuracies.iter() {
            if !(model == "googlenet" && dataset == "dtd") {
                acc.insert(model, dataset, a).unwrap();
            }
        }
        m.accuracies = acc;
    });
    let o = run("evaluate", &b.config());
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("\"googlenet\" on dataset \"dtd\""),
        "{}",
        stderr(&o)
    );
}

#[test]
fn static_ablate_fidelity_commands() {
    let b = two_dataset_bench();
    let o = run("static", &b.config());
    assert!(o.status.success(), "{}", stderr(&o));
    let s = std::fs::read_to_string(b.out().join("static_scores.csv")).unwrap();
    assert!(s.starts_with("model,score\nresnet34,5.0\n"), "{s}");
    assert!(std::fs::read_to_string(b.out().join("static_tau.csv"))
        .unwrap()
        .starts_with("dataset,tau_w\npets,"));

    assert_eq!(run("ablate", &b.config()).status.code(), Some(1));
    assert!(run("score", &b.config()).status.success());
    assert!(run("ablate", &b.config()).status.success());
    assert!(run("fidelity", &b.config()).status.success());
    let fid: Vec<FidelityRow> = read_rows(&b.out().join("fidelity.csv")).unwrap();
    assert_eq!(fid.len(), 14);
}

#[test]
fn audit_writes_schema_and_exits_zero() {
    let b = two_dataset_bench();
    let o = run("audit", &b.config());
    assert!(o.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(b.out().join("audit.json")).unwrap())
            .unwrap();
    for check in [
        "family_hierarchy",
        "budget_match",
        "headroom",
        "domain_variety",
        "rank_dispersion",
    ] {
        let v = doc[check]["verdict"].as_str().unwrap();
        assert!(["pass", "flag", "insufficient"].contains(&v));
        assert!(doc[check]["evidence"].is_string());
    }
    assert_eq!(doc["family_hierarchy"]["verdict"], "flag");
    assert!(doc["dispersion"]["top1_concentration"].is_number());
    assert!(doc["dispersion"]["mean_pairwise_tau"].is_number());
}

#[test]
fn data_root_override_and_environment_fallback() {
    let b = two_dataset_bench();
    let moved = b.root().join("elsewhere");
    std::fs::rename(b.data(), &moved).unwrap();
    std::fs::write(b.config(), r#"{"output_dir": "out"}"#).unwrap();
    assert_eq!(run("validate", &b.config()).status.code(), Some(1));
    let o = site(&[
        "validate",
        "--config",
        b.config().to_str().unwrap(),
        "--data-root",
        moved.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_site"))
        .args(["validate", "--config", b.config().to_str().unwrap()])
        .env("SITE_DATA_ROOT", &moved)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn full_pool_scores_every_triple() {
    let mut layout = common::standard_layout(
        site_oracle::benchmarks::STANDARD_DATASETS
            .iter()
            .map(|&(id, _, dom)| (id, 3, dom))
            .collect(),
    );
    layout.per_class = 4;
    layout.dim = 3;
    let b = common::build(&layout, common::CONFIG);
    let store = site_bench::load_manifest(&b.data().join("manifest.json"), None).unwrap();
    assert_eq!(store.manifest.features.len(), 66);
    let o = run("score", &b.config());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read_scores(&b.out().join("scores.csv")).unwrap().len(), 396);
    assert!(run("evaluate", &b.config()).status.success());
}
