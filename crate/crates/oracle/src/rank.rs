//! Rank statistics by enumerating ordered pairs.

/// Rank by counting how many models beat each one (ties broken by id).
pub fn ranks_by_counting(ids: &[String], g: &[f64]) -> Vec<usize> {
    (0..g.len())
        .map(|i| {
            (0..g.len())
                .filter(|&j| g[j] > g[i] || (g[j] == g[i] && ids[j] < ids[i]))
                .count()
        })
        .collect()
}

fn sign(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum()
    }
}

pub fn kendall(g: &[f64], t: &[f64]) -> f64 {
    let m = g.len();
    let mut s = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                s += sign(g[i] - g[j]) * sign(t[i] - t[j]);
            }
        }
    }
    s / (m * (m - 1)) as f64
}

pub fn weighted_kendall(ids: &[String], g: &[f64], t: &[f64]) -> f64 {
    let rho = ranks_by_counting(ids, g);
    let m = g.len();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let w = 1.0 / (rho[i] + 1) as f64 + 1.0 / (rho[j] + 1) as f64;
                num += sign(g[i] - g[j]) * sign(t[i] - t[j]) * w;
                den += w;
            }
        }
    }
    num / den
}

/// Single-pass sums form of Pearson's r.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Lexicographic permutations of `0..n` (Heap's algorithm would do, but order is handy).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
