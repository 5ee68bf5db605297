use site_core::metrics::{
    coding_rate, gbc, hscore, logme, nleep, transrate, GbcOptions, HScoreOptions, LogMeOptions,
    NleepOptions, TransRateOptions,
};
use site_core::{linalg, FeatureMatrix, LabelVector};
use site_oracle::fixtures::{self, rng, to_rows};
use site_oracle::naive;

#[test]
fn hscore_matches_naive_covariance_and_jacobi_pinv() {
    let mut r = rng(7);
    for trial in 0..5 {
        let (f, y) = fixtures::blobs(&mut r, 50, 4, 16, 1.0 + trial as f64);
        let got = hscore(&f, &y, &HScoreOptions::default()).unwrap().value;
        let want = naive::hscore(&to_rows(&f), y.labels());
        assert!(
            (got - want).abs() < 1e-8 * want.abs().max(1.0),
            "trial {trial}: {got} vs {want}"
        );
    }
}

#[test]
fn hscore_rank_deficient_matches_oracle() {
    let mut r = rng(8);
    let (base, y) = fixtures::random(&mut r, 120, 6, 3);
    // duplicate the first three columns so the covariance has rank 6 of 9
    let values: Vec<f32> = (0..base.n())
        .flat_map(|i| {
            let row = base.row(i);
            row.iter()
                .copied()
                .chain(row[..3].iter().copied())
                .collect::<Vec<_>>()
        })
        .collect();
    let f = FeatureMatrix::new("m", "ds", 120, 9, values).unwrap();
    let s = hscore(&f, &y, &HScoreOptions::default()).unwrap();
    let want = naive::hscore(&to_rows(&f), y.labels());
    assert!((s.value - want).abs() < 1e-8, "{} vs {want}", s.value);
    assert!(s
        .diagnostics
        .notes
        .iter()
        .any(|n| n.starts_with("rank-deficient")));
}

#[test]
fn covariance_matches_naive_loops() {
    let mut r = rng(9);
    let (f, _) = fixtures::random(&mut r, 200, 16, 2);
    let got = linalg::covariance(&linalg::to_matrix(&f, None));
    let want = naive::covariance(&to_rows(&f));
    for a in 0..16 {
        for b in 0..16 {
            assert!((got[(a, b)] - want[a][b]).abs() < 1e-8);
        }
    }
}

#[test]
fn pinv_matches_jacobi_pinv() {
    let mut r = rng(10);
    let (f, _) = fixtures::random(&mut r, 40, 12, 2);
    let cov = linalg::covariance(&linalg::to_matrix(&f, None));
    let (got, rank) = linalg::pinv_symmetric(&cov, 1e-10);
    let rows: naive::Mat = (0..12)
        .map(|i| (0..12).map(|j| cov[(i, j)]).collect())
        .collect();
    let want = naive::pinv_symmetric(&rows, 1e-10);
    assert_eq!(rank, 12);
    for a in 0..12 {
        for b in 0..12 {
            assert!((got[(a, b)] - want[a][b]).abs() < 1e-8, "({a},{b})");
        }
    }
}

#[test]
fn coding_rate_logdet_matches_eigenvalue_sum() {
    let mut r = rng(11);
    for &(n, d) in &[(200usize, 16usize), (10, 16), (50, 3)] {
        for &eps in &[0.5, 1.0, 2.0] {
            let (f, _) = fixtures::random(&mut r, n, d, 2);
            let z = linalg::centered(&linalg::to_matrix(&f, None));
            let got = coding_rate(&z, eps).unwrap();
            let rows: naive::Mat = (0..n)
                .map(|i| (0..d).map(|j| z[(i, j)]).collect())
                .collect();
            let want = naive::coding_rate_eigen(&rows, eps);
            assert!(
                (got - want).abs() < 1e-8,
                "n={n} d={d} eps={eps}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn transrate_matches_eigenvalue_oracle() {
    let mut r = rng(12);
    for &(per, c, d) in &[(50usize, 4usize, 16usize), (3, 3, 16), (30, 2, 5)] {
        let (f, y) = fixtures::blobs(&mut r, per, c, d, 2.0);
        let got = transrate(&f, &y, &TransRateOptions::default())
            .unwrap()
            .value;
        let want = naive::transrate(&to_rows(&f), y.labels(), 1.0);
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        assert!(got >= -1e-12);
    }
}

#[test]
fn transrate_zero_features_is_zero() {
    let f = FeatureMatrix::new("m", "ds", 8, 4, vec![0.0; 32]).unwrap();
    let y = LabelVector::new("ds", vec![0, 1, 0, 1, 0, 1, 0, 1]).unwrap();
    assert!(
        transrate(&f, &y, &TransRateOptions::default())
            .unwrap()
            .value
            .abs()
            <= 1e-12
    );
}

#[test]
fn logme_fixed_point_reaches_grid_optimum() {
    let mut r = rng(13);
    let mut worst = f64::INFINITY;
    for instance in 0..20 {
        let (f, y) = if instance % 2 == 0 {
            fixtures::random(&mut r, 100, 8, 3)
        } else {
            fixtures::linear_labels(&mut r, 100, 8, 3, 0.5)
        };
        let got = logme(&f, &y, &LogMeOptions::default()).unwrap().value;
        let rows = to_rows(&f);
        let mut grid = 0.0;
        for c in 0..y.num_classes() as u32 {
            let target: Vec<f64> = y
                .labels()
                .iter()
                .map(|&l| if l == c { 1.0 } else { 0.0 })
                .collect();
            grid += naive::blr_grid_max(&rows, &target, 60, -4.0, 6.0);
        }
        grid /= y.num_classes() as f64;
        worst = worst.min(got - grid);
        assert!(
            got >= grid - 1e-2,
            "instance {instance}: fixed point {got} < grid {grid}"
        );
    }
    eprintln!("logme: worst margin over grid = {worst:.3e}");
}

#[test]
fn nleep_single_component_is_label_entropy() {
    let mut r = rng(14);
    let (f, y) = fixtures::random(&mut r, 40, 3, 2);
    let opts = NleepOptions {
        components: Some(1),
        ..NleepOptions::default()
    };
    let v = nleep(&f, &y, &opts).unwrap().value;
    assert!((v - 0.5f64.ln()).abs() < 1e-6, "{v}");
}

#[test]
fn nleep_separated_blobs_approach_zero_from_below() {
    let mut r = rng(15);
    let (f, y) = fixtures::blobs(&mut r, 40, 2, 4, 30.0);
    let opts = NleepOptions {
        components: Some(2),
        ..NleepOptions::default()
    };
    let v = nleep(&f, &y, &opts).unwrap().value;
    assert!(v <= 0.0 && v > -1e-3, "{v}");
}

#[test]
fn gbc_matches_textbook_bhattacharyya() {
    let mut r = rng(16);
    let (f, y) = fixtures::blobs(&mut r, 30, 3, 5, 1.5);
    let got = gbc(&f, &y, &GbcOptions::default()).unwrap().value;
    let rows = to_rows(&f);
    let stats: Vec<(Vec<f64>, Vec<f64>)> = (0..3u32)
        .map(|c| {
            let members: Vec<&Vec<f64>> = rows
                .iter()
                .zip(y.labels())
                .filter(|(_, &l)| l == c)
                .map(|(r, _)| r)
                .collect();
            let k = members.len() as f64;
            let mean: Vec<f64> = (0..5)
                .map(|j| members.iter().map(|r| r[j]).sum::<f64>() / k)
                .collect();
            let var: Vec<f64> = (0..5)
                .map(|j| {
                    (members
                        .iter()
                        .map(|r| (r[j] - mean[j]).powi(2))
                        .sum::<f64>()
                        / k)
                        .max(1e-6)
                })
                .collect();
            (mean, var)
        })
        .collect();
    let mut want = 0.0;
    for a in 0..3 {
        for b in (a + 1)..3 {
            let db: f64 = (0..5)
                .map(|j| {
                    naive::bhattacharyya_1d(
                        stats[a].0[j],
                        stats[a].1[j],
                        stats[b].0[j],
                        stats[b].1[j],
                    )
                })
                .sum();
            want -= (-db).exp();
        }
    }
    assert!((got - want).abs() < 1e-9, "{got} vs {want}");
}

#[test]
fn gbc_identical_classes() {
    let f = FeatureMatrix::new("m", "ds", 4, 1, vec![1.0, -1.0, 1.0, -1.0]).unwrap();
    let two = LabelVector::new("ds", vec![0, 0, 1, 1]).unwrap();
    assert!((gbc(&f, &two, &GbcOptions::default()).unwrap().value + 1.0).abs() < 1e-9);
    let f = FeatureMatrix::new("m", "ds", 6, 1, vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]).unwrap();
    let three = LabelVector::new("ds", vec![0, 0, 1, 1, 2, 2]).unwrap();
    assert!((gbc(&f, &three, &GbcOptions::default()).unwrap().value + 3.0).abs() < 1e-9);
}

#[test]
fn hscore_one_dimensional_fixture() {
    let f = FeatureMatrix::new("m", "ds", 4, 1, vec![0.0, 0.0, 1.0, 1.0]).unwrap();
    let y = LabelVector::new("ds", vec![0, 0, 1, 1]).unwrap();
    assert!((hscore(&f, &y, &HScoreOptions::default()).unwrap().value - 1.0).abs() < 1e-9);
}
