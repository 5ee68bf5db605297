#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;

pub type Mat = Vec<Vec<f64>>;

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![0.0; c]; r]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for i in 0..n {
        m[i][i] = 1.0;
    }
    m
}

pub fn transpose(a: &Mat) -> Mat {
    let (r, c) = (a.len(), a[0].len());
    let mut t = zeros(c, r);
    for i in 0..r {
        for j in 0..c {
            t[j][i] = a[i][j];
        }
    }
    t
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    let mut out = zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            let mut s = 0.0;
            for t in 0..k {
                s += a[i][t] * b[t][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn matvec(a: &Mat, v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn trace(a: &Mat) -> f64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

/// Population covariance by explicit double loops.
pub fn covariance(x: &Mat) -> Mat {
    let n = x.len();
    let d = x[0].len();
    let mut mean = vec![0.0; d];
    for row in x {
        for j in 0..d {
            mean[j] += row[j];
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }
    let mut c = zeros(d, d);
    for row in x {
        for a in 0..d {
            for b in 0..d {
                c[a][b] += (row[a] - mean[a]) * (row[b] - mean[b]);
            }
        }
    }
    for row in c.iter_mut() {
        for v in row.iter_mut() {
            *v /= n as f64;
        }
    }
    c
}

/// Cyclic Jacobi rotations. Returns eigenvalues and eigenvectors (as columns).
pub fn jacobi_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.len();
    let mut a = a.clone();
    let mut v = identity(n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Pseudo-inverse of a symmetric PSD matrix via Jacobi.
pub fn pinv_symmetric(a: &Mat, rel_cutoff: f64) -> Mat {
    let n = a.len();
    let (vals, vecs) = jacobi_eigen(a);
    let top = vals.iter().copied().fold(0.0, f64::max);
    let mut out = zeros(n, n);
    for (k, &l) in vals.iter().enumerate() {
        if top > 0.0 && l > rel_cutoff * top {
            for i in 0..n {
                for j in 0..n {
                    out[i][j] += vecs[i][k] * vecs[j][k] / l;
                }
            }
        }
    }
    out
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for i in 0..n {
            if i != col {
                let f = m[i][col];
                if f != 0.0 {
                    for j in 0..n {
                        m[i][j] -= f * m[col][j];
                        inv[i][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// `ln |det a|` by Gaussian elimination.
pub fn log_abs_det(a: &Mat) -> f64 {
    let n = a.len();
    let mut m = a.clone();
    let mut acc = 0.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        let p = m[col][col];
        acc += p.abs().ln();
        for i in (col + 1)..n {
            let f = m[i][col] / p;
            for j in col..n {
                m[i][j] -= f * m[col][j];
            }
        }
    }
    acc
}

/// H-score from per-sample class means, naive covariances and a Jacobi pseudo-inverse.
pub fn hscore(x: &Mat, labels: &[u32]) -> f64 {
    let d = x[0].len();
    let classes = *labels.iter().max().unwrap() as usize + 1;
    let mut sums = zeros(classes, d);
    let mut counts = vec![0.0; classes];
    for (row, &l) in x.iter().zip(labels) {
        counts[l as usize] += 1.0;
        for j in 0..d {
            sums[l as usize][j] += row[j];
        }
    }
    let g: Mat = labels
        .iter()
        .map(|&l| {
            sums[l as usize]
                .iter()
                .map(|s| s / counts[l as usize])
                .collect()
        })
        .collect();
    let pinv = pinv_symmetric(&covariance(x), 1e-10);
    trace(&matmul(&pinv, &covariance(&g)))
}

/// Coding-rate gain through the eigenvalues of `Z^T Z`: `1/2 sum ln(1 + lambda d/(n eps^2))`.
pub fn coding_rate_eigen(z: &Mat, eps: f64) -> f64 {
    let n = z.len() as f64;
    let d = z[0].len() as f64;
    let (vals, _) = jacobi_eigen(&matmul(&transpose(z), z));
    0.5 * vals
        .iter()
        .map(|l| (1.0 + l.max(0.0) * d / (n * eps * eps)).ln())
        .sum::<f64>()
}

pub fn center(x: &Mat) -> Mat {
    let n = x.len() as f64;
    let d = x[0].len();
    let mean: Vec<f64> = (0..d)
        .map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n)
        .collect();
    x.iter()
        .map(|r| r.iter().zip(&mean).map(|(v, m)| v - m).collect())
        .collect()
}

pub fn transrate(x: &Mat, labels: &[u32], eps: f64) -> f64 {
    let z = center(x);
    let n = z.len() as f64;
    let classes = *labels.iter().max().unwrap() + 1;
    let mut value = coding_rate_eigen(&z, eps);
    for c in 0..classes {
        let zc: Mat = z
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == c)
            .map(|(r, _)| r.clone())
            .collect();
        value -= zc.len() as f64 / n * coding_rate_eigen(&center(&zc), eps);
    }
    value
}

/// Sufficient statistics of a regression problem: `F^T F`, `F^T y`, `y^T y`.
pub struct Regression {
    pub n: usize,
    pub gram: Mat,
    pub fty: Vec<f64>,
    pub yty: f64,
}

impl Regression {
    pub fn new(f: &Mat, y: &[f64]) -> Self {
        let ft = transpose(f);
        Self {
            n: f.len(),
            gram: matmul(&ft, f),
            fty: matvec(&ft, y),
            yty: y.iter().map(|v| v * v).sum(),
        }
    }

    /// Log evidence evaluated directly from `A = alpha I + beta F^T F`
    /// and `m = beta A^-1 F^T y`.
    pub fn log_evidence(&self, alpha: f64, beta: f64) -> f64 {
        let n = self.n as f64;
        let d = self.gram.len();
        let mut a = self.gram.clone();
        for i in 0..d {
            for j in 0..d {
                a[i][j] *= beta;
            }
            a[i][i] += alpha;
        }
        let a_inv = inverse(&a).expect("alpha I + beta F^T F is positive definite");
        let m: Vec<f64> = matvec(&a_inv, &self.fty).iter().map(|v| beta * v).collect();
        let gm = matvec(&self.gram, &m);
        let mty: f64 = m.iter().zip(&self.fty).map(|(a, b)| a * b).sum();
        let mgm: f64 = m.iter().zip(&gm).map(|(a, b)| a * b).sum();
        let res2 = (self.yty - 2.0 * mty + mgm).max(0.0);
        let m2: f64 = m.iter().map(|v| v * v).sum();
        0.5 * n * beta.ln() + 0.5 * d as f64 * alpha.ln()
            - 0.5 * n * (2.0 * PI).ln()
            - 0.5 * beta * res2
            - 0.5 * alpha * m2
            - 0.5 * log_abs_det(&a)
    }
}

pub fn blr_log_evidence(f: &Mat, y: &[f64], alpha: f64, beta: f64) -> f64 {
    Regression::new(f, y).log_evidence(alpha, beta)
}

/// Maximum of the per-sample evidence over a `points x points` log10 grid
/// of `(alpha, beta)` spanning `[lo, hi]`.
pub fn blr_grid_max(f: &Mat, y: &[f64], points: usize, lo: f64, hi: f64) -> f64 {
    let reg = Regression::new(f, y);
    let grid: Vec<f64> = (0..points)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (points - 1) as f64))
        .collect();
    let mut best = f64::NEG_INFINITY;
    for &alpha in &grid {
        for &beta in &grid {
            best = best.max(reg.log_evidence(alpha, beta) / reg.n as f64);
        }
    }
    best
}

/// Bhattacharyya distance between 1-D Gaussians, textbook form.
pub fn bhattacharyya_1d(m1: f64, v1: f64, m2: f64, v2: f64) -> f64 {
    0.25 * (m1 - m2).powi(2) / (v1 + v2) + 0.25 * (0.25 * (v1 / v2 + v2 / v1 + 2.0)).ln()
}
