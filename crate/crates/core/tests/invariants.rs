use proptest::prelude::*;
use rand::seq::SliceRandom;
use site_core::metrics::SfdaOptions;
use site_core::types::MetricId;
use site_core::{score, FeatureMatrix, LabelVector, MetricConfig};
use site_oracle::fixtures::{self, rng};

fn all_metrics() -> Vec<MetricConfig> {
    MetricId::FEATURE_METRICS
        .iter()
        .map(|&m| MetricConfig::default_for(m).unwrap())
        .collect()
}

fn value(f: &FeatureMatrix, y: &LabelVector, cfg: &MetricConfig) -> f64 {
    score(f, y, cfg).unwrap().value
}

#[test]
fn row_permutation_leaves_scores_unchanged() {
    let mut r = rng(21);
    let (f, y) = fixtures::blobs(&mut r, 20, 3, 6, 1.5);
    for cfg in all_metrics() {
        let base = value(&f, &y, &cfg);
        for _ in 0..3 {
            let mut perm: Vec<usize> = (0..f.n()).collect();
            perm.shuffle(&mut r);
            let (pf, py) = fixtures::permute_rows(&f, &y, &perm);
            let v = value(&pf, &py, &cfg);
            assert!((v - base).abs() <= 1e-9, "{}: {v} vs {base}", cfg.id());
        }
    }
}

#[test]
fn class_relabel_leaves_scores_unchanged() {
    let mut r = rng(22);
    let (f, y) = fixtures::blobs(&mut r, 20, 4, 6, 1.5);
    for cfg in all_metrics() {
        let base = value(&f, &y, &cfg);
        for mapping in [[1u32, 0, 3, 2], [3, 2, 1, 0], [2, 3, 0, 1]] {
            let v = value(&f, &fixtures::relabel(&y, &mapping), &cfg);
            assert!(
                (v - base).abs() <= 1e-9,
                "{} {mapping:?}: {v} vs {base}",
                cfg.id()
            );
        }
    }
}

#[test]
fn shuffled_labels_never_beat_true_labels() {
    let mut r = rng(23);
    let (f, y) = fixtures::blobs(&mut r, 25, 3, 6, 6.0);
    for cfg in all_metrics() {
        let truth = value(&f, &y, &cfg);
        let mut margin = f64::INFINITY;
        for _ in 0..20 {
            let v = value(&f, &fixtures::shuffled_labels(&mut r, &y), &cfg);
            margin = margin.min(truth - v);
        }
        eprintln!("{}: min margin over 20 shuffles = {margin:.4}", cfg.id());
        assert!(
            margin >= -1e-9,
            "{}: a shuffle scored higher by {}",
            cfg.id(),
            -margin
        );
    }
}

#[test]
fn repeated_scoring_is_bit_identical() {
    let mut r = rng(24);
    let (f, y) = fixtures::random(&mut r, 60, 5, 3);
    for cfg in all_metrics() {
        assert_eq!(
            value(&f, &y, &cfg).to_bits(),
            value(&f, &y, &cfg).to_bits(),
            "{}",
            cfg.id()
        );
    }
}

#[test]
fn sfda_noise_stage_is_seeded() {
    let mut r = rng(25);
    let (f, y) = fixtures::blobs(&mut r, 15, 3, 4, 2.0);
    let cfg = MetricConfig::Sfda(SfdaOptions {
        noise_std: Some(0.1),
        ..SfdaOptions::default()
    });
    assert_eq!(value(&f, &y, &cfg).to_bits(), value(&f, &y, &cfg).to_bits());
    let other = cfg.clone().with_seed(7);
    assert_ne!(
        value(&f, &y, &cfg).to_bits(),
        value(&f, &y, &other).to_bits()
    );
}

fn small_problem() -> impl Strategy<Value = (FeatureMatrix, LabelVector, Vec<usize>)> {
    (2usize..4, 1usize..5, 3usize..8).prop_flat_map(|(classes, d, per)| {
        let n = classes * per;
        (
            proptest::collection::vec(-5.0f32..5.0, n * d),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(values, perm)| {
                let labels = (0..n).map(|i| (i % classes) as u32).collect();
                (
                    FeatureMatrix::new("m", "ds", n, d, values).unwrap(),
                    LabelVector::new("ds", labels).unwrap(),
                    perm,
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permutation_invariance_on_random_inputs((f, y, perm) in small_problem()) {
        let (pf, py) = fixtures::permute_rows(&f, &y, &perm);
        for cfg in all_metrics() {
            let a = score(&f, &y, &cfg);
            let b = score(&pf, &py, &cfg);
            match (a, b) {
                (Ok(a), Ok(b)) => prop_assert!((a.value - b.value).abs() <= 1e-9 * a.value.abs().max(1.0),
                    "{}: {} vs {}", cfg.id(), a.value, b.value),
                (Err(a), Err(b)) => prop_assert_eq!(a, b),
                (a, b) => prop_assert!(false, "{}: {:?} vs {:?}", cfg.id(), a.map(|s| s.value), b.map(|s| s.value)),
            }
        }
    }

    #[test]
    fn scores_are_finite_and_bounded((f, y, _perm) in small_problem()) {
        for cfg in all_metrics() {
            let s = score(&f, &y, &cfg).unwrap();
            prop_assert!(s.value.is_finite());
            match cfg.id() {
                MetricId::HScore | MetricId::TransRate => prop_assert!(s.value >= -1e-9, "{} = {}", cfg.id(), s.value),
                MetricId::Gbc | MetricId::Nleep | MetricId::Sfda => prop_assert!(s.value <= 1e-12, "{} = {}", cfg.id(), s.value),
                _ => {}
            }
        }
    }
}
