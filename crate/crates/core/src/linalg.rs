//! Dense helpers on top of `nalgebra` shared by the metrics.

use alloc::vec::Vec;

use libm::log;
use nalgebra::{DMatrix, DVector};

use crate::types::FeatureMatrix;

/// Features as an `f64` matrix, rows taken in `order` when given.
pub fn to_matrix(features: &FeatureMatrix, order: Option<&[usize]>) -> DMatrix<f64> {
    let (n, d) = (features.n(), features.d());
    match order {
        Some(order) => DMatrix::from_fn(n, d, |i, j| features.row(order[i])[j] as f64),
        None => DMatrix::from_fn(n, d, |i, j| features.row(i)[j] as f64),
    }
}

pub fn column_means(x: &DMatrix<f64>) -> DVector<f64> {
    let n = x.nrows() as f64;
    DVector::from_iterator(x.ncols(), x.column_iter().map(|c| c.sum() / n))
}

pub fn centered(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mean = column_means(x);
    let mut out = x.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col.add_scalar_mut(-mean[j]);
    }
    out
}

/// Population (divide-by-n) covariance.
pub fn covariance(x: &DMatrix<f64>) -> DMatrix<f64> {
    let z = centered(x);
    let mut c = z.tr_mul(&z);
    c /= x.nrows() as f64;
    symmetrize(&mut c);
    c
}

pub fn symmetrize(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}

/// Symmetric eigendecomposition with eigenvalues sorted in descending order and
/// each eigenvector signed so its largest-magnitude entry is positive.
pub struct SortedEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl SortedEigen {
    pub fn new(a: &DMatrix<f64>) -> Self {
        let eig = a.clone().symmetric_eigen();
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = DMatrix::zeros(a.nrows(), idx.len());
        for (k, &i) in idx.iter().enumerate() {
            let col = eig.eigenvectors.column(i);
            let pivot =
                col.iter().copied().fold(
                    0.0f64,
                    |best, v| {
                        if v.abs() > best.abs() {
                            v
                        } else {
                            best
                        }
                    },
                );
            let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
            vectors.set_column(k, &(col * sign));
        }
        Self { values, vectors }
    }
}

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix. Eigenvalues at or below
/// `rel_cutoff * max_eigenvalue` are treated as zero. Returns the inverse and its rank.
pub fn pinv_symmetric(a: &DMatrix<f64>, rel_cutoff: f64) -> (DMatrix<f64>, usize) {
    let eig = SortedEigen::new(a);
    let n = a.nrows();
    let mut out = DMatrix::zeros(n, n);
    let top = eig.values.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return (out, 0);
    }
    let cutoff = rel_cutoff * top;
    let mut rank = 0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda > cutoff {
            let v = eig.vectors.column(k);
            out += (v * v.transpose()) / lambda;
            rank += 1;
        }
    }
    (out, rank)
}

/// `ln det(a)` for symmetric positive definite `a` via Cholesky; `None` if not PD.
pub fn logdet_spd(a: &DMatrix<f64>) -> Option<f64> {
    let chol = a.clone().cholesky()?;
    let l = chol.l_dirty();
    Some(2.0 * (0..a.nrows()).map(|i| log(l[(i, i)])).sum::<f64>())
}

/// Projects centered data onto the leading principal axes that together
/// retain at least `retain` of the total variance. Returns the projected
/// data, the number of axes kept and the fraction of variance retained.
pub fn pca_retaining(x: &DMatrix<f64>, retain: f64) -> (DMatrix<f64>, usize, f64) {
    let z = centered(x);
    let eig = SortedEigen::new(&covariance(x));
    let total: f64 = eig.values.iter().map(|v| v.max(0.0)).sum();
    if total <= 0.0 {
        return (DMatrix::zeros(x.nrows(), 1), 1, 1.0);
    }
    let mut acc = 0.0;
    let mut k = 0;
    for &v in &eig.values {
        acc += v.max(0.0);
        k += 1;
        if acc >= retain * total {
            break;
        }
    }
    let basis = eig.vectors.columns(0, k).into_owned();
    (z * basis, k, acc / total)
}

/// Projects centered data onto the first `k` principal axes (`k` clipped to `d`).
pub fn pca_dims(x: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let k = k.min(x.ncols()).max(1);
    let eig = SortedEigen::new(&covariance(x));
    centered(x) * eig.vectors.columns(0, k).into_owned()
}

pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + log(values.iter().map(|v| libm::exp(v - max)).sum::<f64>())
}
