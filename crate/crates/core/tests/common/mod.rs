//! Independent reference implementations shared by the integration tests.
//! None of them call into the library's numerical code.

#![allow(dead_code, clippy::needless_range_loop)]

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use feature_clock::numstats::Matrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Matrix {
    let data = (0..n * d).map(|_| normal(rng)).collect();
    Matrix::from_row_major(n, d, data).unwrap()
}

/// `Y = X W + noise` with a random `d x 2` weight matrix.
pub fn linear_embedding(rng: &mut ChaCha8Rng, x: &Matrix, noise: f64) -> Matrix {
    let d = x.cols();
    let w: Vec<f64> = (0..2 * d).map(|_| normal(rng)).collect();
    let mut data = Vec::with_capacity(x.rows() * 2);
    for i in 0..x.rows() {
        for k in 0..2 {
            let s: f64 = (0..d).map(|j| x.get(i, j) * w[j * 2 + k]).sum();
            data.push(s + noise * normal(rng));
        }
    }
    Matrix::from_row_major(x.rows(), 2, data).unwrap()
}

/// Two-pass mean and sample standard deviation.
pub fn two_pass_moments(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let ss: f64 = v.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Centers each column in f64 (inputs to the exact oracle are the centered values).
pub fn centered(x: &Matrix) -> Matrix {
    let (n, d) = x.shape();
    let means: Vec<f64> = (0..d).map(|j| x.column(j).iter().sum::<f64>() / n as f64).collect();
    let data = (0..n)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| x.get(i, j) - means[j])
        .collect();
    Matrix::from_row_major(n, d, data).unwrap()
}

fn q(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite")
}

/// Solves `A z = b` exactly by Gauss-Jordan elimination with full pivoting.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let d = b.len();
    let mut col_perm: Vec<usize> = (0..d).collect();
    for k in 0..d {
        let mut best = (k, k);
        let mut best_abs = BigRational::zero();
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                if v.abs() > best_abs {
                    best_abs = v.abs();
                    best = (i, j);
                }
            }
        }
        assert!(!best_abs.is_zero(), "singular system");
        a.swap(k, best.0);
        b.swap(k, best.0);
        if best.1 != k {
            for row in a.iter_mut() {
                row.swap(k, best.1);
            }
            col_perm.swap(k, best.1);
        }
        let pivot = a[k][k].clone();
        for i in 0..d {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..d {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            let t = &f * &b[k];
            b[i] -= t;
        }
    }
    let mut z = vec![BigRational::zero(); d];
    for k in 0..d {
        z[col_perm[k]] = &b[k] / &a[k][k];
    }
    z
}

#[derive(Debug, Clone)]
pub struct OracleFit {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub dof: usize,
}

/// Exact normal-equations OLS on the given (already centered) design,
/// spending one extra degree of freedom for the absorbed intercept.
pub fn ols_oracle(x: &Matrix, y: &[f64]) -> OracleFit {
    let (n, d) = x.shape();
    let xq: Vec<Vec<BigRational>> = (0..n).map(|i| (0..d).map(|j| q(x.get(i, j))).collect()).collect();
    let yq: Vec<BigRational> = y.iter().map(|&v| q(v)).collect();
    let mut xtx = vec![vec![BigRational::zero(); d]; d];
    let mut xty = vec![BigRational::zero(); d];
    for i in 0..n {
        for a in 0..d {
            xty[a] += &xq[i][a] * &yq[i];
            for b in a..d {
                let p = &xq[i][a] * &xq[i][b];
                xtx[a][b] += p;
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            xtx[a][b] = xtx[b][a].clone();
        }
    }
    let beta = solve_exact(xtx.clone(), xty);
    let mut rss = BigRational::zero();
    for i in 0..n {
        let mut r = yq[i].clone();
        for j in 0..d {
            r -= &xq[i][j] * &beta[j];
        }
        rss += &r * &r;
    }
    let dof = n - d - 1;
    let sigma2 = rss / BigRational::from_integer(BigInt::from(dof));
    let mut std_errors = Vec::with_capacity(d);
    for j in 0..d {
        let mut e = vec![BigRational::zero(); d];
        e[j] = BigRational::from_integer(BigInt::from(1));
        let inv_col = solve_exact(xtx.clone(), e);
        let var = &sigma2 * &inv_col[j];
        std_errors.push(var.to_f64().unwrap().sqrt());
    }
    let coefficients: Vec<f64> = beta.iter().map(|b| b.to_f64().unwrap()).collect();
    let t_stats = coefficients.iter().zip(&std_errors).map(|(b, s)| b / s).collect();
    OracleFit {
        coefficients,
        std_errors,
        t_stats,
        dof,
    }
}

/// `Γ((ν+1)/2) / Γ(ν/2)` by the half-integer recurrence.
fn gamma_ratio(dof: usize) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let (mut r, mut nu) = if dof % 2 == 1 { (1.0 / sqrt_pi, 1) } else { (sqrt_pi / 2.0, 2) };
    while nu < dof {
        r *= (nu as f64 + 1.0) / nu as f64;
        nu += 2;
    }
    r
}

pub fn t_density(s: f64, dof: usize) -> f64 {
    let nu = dof as f64;
    gamma_ratio(dof) / (nu * std::f64::consts::PI).sqrt() * (1.0 + s * s / nu).powf(-(nu + 1.0) / 2.0)
}

/// Two-sided p-value `1 - 2 ∫_0^|t| f(s) ds` by composite Simpson's rule.
pub fn t_p_simpson(t: f64, dof: usize) -> f64 {
    let upper = t.abs();
    if upper == 0.0 {
        return 1.0;
    }
    let intervals = 40_000;
    let h = upper / intervals as f64;
    let mut sum = t_density(0.0, dof) + t_density(upper, dof);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * t_density(k as f64 * h, dof);
    }
    1.0 - 2.0 * sum * h / 3.0
}

/// Minimum spanning-tree weight by enumerating every (k-1)-edge subset.
pub fn brute_force_mst(centers: &[(f64, f64)]) -> (f64, Vec<(usize, usize)>) {
    let k = centers.len();
    let edges: Vec<(usize, usize, f64)> = (0..k)
        .flat_map(|a| ((a + 1)..k).map(move |b| (a, b)))
        .map(|(a, b)| {
            let (p, r) = (centers[a], centers[b]);
            (a, b, (p.0 - r.0).hypot(p.1 - r.1))
        })
        .collect();
    let m = edges.len();
    let mut best = (f64::INFINITY, Vec::new());
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != k - 1 {
            continue;
        }
        let chosen: Vec<&(usize, usize, f64)> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| &edges[i]).collect();
        // connected iff a flood fill from 0 reaches every node
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &&(a, b, _) in &chosen {
                if seen[a] != seen[b] {
                    seen[a] = true;
                    seen[b] = true;
                    changed = true;
                }
            }
        }
        if seen.iter().all(|&s| s) {
            let w: f64 = chosen.iter().map(|e| e.2).sum();
            if w < best.0 {
                let mut set: Vec<(usize, usize)> = chosen.iter().map(|e| (e.0, e.1)).collect();
                set.sort_unstable();
                best = (w, set);
            }
        }
    }
    best
}

/// Two groups that differ only in feature `shifted` (by `shift` standard deviations).
pub fn shifted_groups(seed: u64, per_group: usize, d: usize, shifted: usize, shift: f64) -> (Matrix, Vec<bool>) {
    let mut r = rng(seed);
    let mut data = Vec::with_capacity(2 * per_group * d);
    let mut labels = Vec::with_capacity(2 * per_group);
    for g in 0..2 {
        for _ in 0..per_group {
            for j in 0..d {
                let base = normal(&mut r);
                data.push(if j == shifted && g == 1 { base + shift } else { base });
            }
            labels.push(g == 1);
        }
    }
    (Matrix::from_row_major(2 * per_group, d, data).unwrap(), labels)
}

/// Angular distance in degrees on a circle of period `period`.
pub fn angle_gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

