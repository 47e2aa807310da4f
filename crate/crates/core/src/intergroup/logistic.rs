//! Binary logistic regression by penalized iteratively reweighted least squares.

use serde::Serialize;

use super::IntergroupError;
use crate::numstats::{normal_two_sided_p, Matrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticOptions {
    /// L2 penalty on the coefficients (never on the intercept).
    pub penalty: f64,
    pub max_iter: usize,
    /// Convergence threshold on the largest parameter update.
    pub tol: f64,
}

impl Default for LogisticOptions {
    fn default() -> Self {
        Self {
            penalty: 1e-6,
            max_iter: 100,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogisticFit {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub std_errors: Vec<f64>,
    pub wald_z: Vec<f64>,
    pub p_values: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

fn softplus(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

/// Design row with a leading 1 for the intercept.
fn linear_predictor(x: &Matrix, i: usize, params: &[f64]) -> f64 {
    params[0] + x.row(i).iter().zip(&params[1..]).map(|(a, b)| a * b).sum::<f64>()
}

fn penalized_loglik(x: &Matrix, y: &[f64], params: &[f64], penalty: f64) -> f64 {
    let ll: f64 = (0..x.rows())
        .map(|i| {
            let eta = linear_predictor(x, i, params);
            y[i] * eta - softplus(eta)
        })
        .sum();
    ll - 0.5 * penalty * params[1..].iter().map(|b| b * b).sum::<f64>()
}

/// Gradient of the penalized log-likelihood with respect to (intercept, coefficients).
pub fn penalized_gradient(x: &Matrix, labels: &[bool], params: &[f64], penalty: f64) -> Vec<f64> {
    let p = x.cols() + 1;
    let mut g = vec![0.0; p];
    for (i, &label) in labels.iter().enumerate() {
        let r = f64::from(u8::from(label)) - sigmoid(linear_predictor(x, i, params));
        g[0] += r;
        for (gj, xij) in g[1..].iter_mut().zip(x.row(i)) {
            *gj += r * xij;
        }
    }
    for j in 1..p {
        g[j] -= penalty * params[j];
    }
    g
}

/// Penalized observed information `X^T W X + penalty * I` (intercept unpenalized).
fn information(x: &Matrix, params: &[f64], penalty: f64) -> Vec<f64> {
    let p = x.cols() + 1;
    let mut h = vec![0.0; p * p];
    let mut row = vec![1.0; p];
    for i in 0..x.rows() {
        let mu = sigmoid(linear_predictor(x, i, params));
        let w = mu * (1.0 - mu);
        row[1..].copy_from_slice(x.row(i));
        for a in 0..p {
            let wa = w * row[a];
            for b in a..p {
                h[a * p + b] += wa * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            h[a * p + b] = h[b * p + a];
        }
    }
    for j in 1..p {
        h[j * p + j] += penalty;
    }
    h
}

/// Cholesky factor (lower, row-major) of a symmetric positive definite matrix.
fn cholesky(a: &[f64], p: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * p + k] * l[j * p + k]).sum();
            if i == j {
                let v = a[i * p + i] - s;
                if v.is_nan() || v <= 0.0 {
                    return None;
                }
                l[i * p + i] = v.sqrt();
            } else {
                l[i * p + j] = (a[i * p + j] - s) / l[j * p + j];
            }
        }
    }
    Some(l)
}

fn cholesky_solve(l: &[f64], p: usize, b: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0; p];
    for i in 0..p {
        let s: f64 = (0..i).map(|k| l[i * p + k] * z[k]).sum();
        z[i] = (b[i] - s) / l[i * p + i];
    }
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = ((i + 1)..p).map(|k| l[k * p + i] * x[k]).sum();
        x[i] = (z[i] - s) / l[i * p + i];
    }
    x
}

/// Diagonal of the inverse from a Cholesky factor.
fn inverse_diagonal(l: &[f64], p: usize) -> Vec<f64> {
    (0..p)
        .map(|j| {
            let mut e = vec![0.0; p];
            e[j] = 1.0;
            cholesky_solve(l, p, &e)[j]
        })
        .collect()
}

/// Fits `P(label = 1) = sigmoid(b0 + x·b)` with the default options.
pub fn logistic_fit(x: &Matrix, labels: &[bool]) -> Result<LogisticFit, IntergroupError> {
    logistic_fit_with(x, labels, &LogisticOptions::default())
}

pub fn logistic_fit_with(
    x: &Matrix,
    labels: &[bool],
    options: &LogisticOptions,
) -> Result<LogisticFit, IntergroupError> {
    let (n, d) = x.shape();
    if labels.len() != n {
        return Err(IntergroupError::Shape(format!("{} labels for {n} rows", labels.len())));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 || positives == n {
        return Err(IntergroupError::SingleClass);
    }
    if n < d + 2 {
        return Err(IntergroupError::InsufficientObservations { n, required: d + 2 });
    }
    let p = d + 1;
    let y: Vec<f64> = labels.iter().map(|&l| f64::from(u8::from(l))).collect();

    let mut params = vec![0.0; p];
    let prior = positives as f64 / n as f64;
    params[0] = (prior / (1.0 - prior)).ln();

    let mut converged = false;
    let mut iterations = 0;
    let mut current = penalized_loglik(x, &y, &params, options.penalty);
    for iter in 1..=options.max_iter {
        iterations = iter;
        let g = penalized_gradient(x, labels, &params, options.penalty);
        let h = information(x, &params, options.penalty);
        let Some(l) = cholesky(&h, p) else {
            break;
        };
        let step = cholesky_solve(&l, p, &g);

        // step halving keeps the penalized likelihood from decreasing
        let mut factor = 1.0;
        let mut candidate: Vec<f64>;
        let mut value;
        loop {
            candidate = params.iter().zip(&step).map(|(a, s)| a + factor * s).collect();
            value = penalized_loglik(x, &y, &candidate, options.penalty);
            if value >= current - 1e-12 * current.abs().max(1.0) || factor < 1e-8 {
                break;
            }
            factor *= 0.5;
        }
        let max_change = step.iter().map(|s| (factor * s).abs()).fold(0.0, f64::max);
        params = candidate;
        current = value;
        if max_change < options.tol {
            converged = true;
            break;
        }
    }

    let h = information(x, &params, options.penalty);
    let inv_diag = match cholesky(&h, p) {
        Some(l) => inverse_diagonal(&l, p),
        None => vec![f64::INFINITY; p],
    };
    let coefficients = params[1..].to_vec();
    let std_errors: Vec<f64> = inv_diag[1..].iter().map(|v| v.max(0.0).sqrt()).collect();
    let wald_z: Vec<f64> = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(b, se)| if *se > 0.0 { b / se } else { 0.0 })
        .collect();
    let p_values = wald_z.iter().map(|&z| normal_two_sided_p(z)).collect();

    Ok(LogisticFit {
        coefficients,
        intercept: params[0],
        std_errors,
        wald_z,
        p_values,
        converged,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_data_has_zero_intercept() {
        let xs = [-2.0, -1.5, -1.0, -0.5, 0.3, 0.6, 1.2, 2.2];
        let labels_pos = [false, false, true, false, true, false, true, true];
        // mirror every point: (x, label) -> (-x, 1 - label)
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (x, l) in xs.iter().zip(labels_pos) {
            rows.push(vec![*x]);
            labels.push(l);
            rows.push(vec![-*x]);
            labels.push(!l);
        }
        let m = Matrix::from_rows(&rows).unwrap();
        let fit = logistic_fit(&m, &labels).unwrap();
        assert!(fit.converged);
        assert!(fit.intercept.abs() < 1e-8);
        assert!(fit.coefficients[0] > 0.0);
    }

    #[test]
    fn single_class_rejected() {
        let m = Matrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        assert!(matches!(
            logistic_fit(&m, &[true, true, true]),
            Err(IntergroupError::SingleClass)
        ));
    }

    #[test]
    fn separable_data_is_flagged() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 - 9.5]).collect();
        let labels: Vec<bool> = (0..20).map(|i| i >= 10).collect();
        let m = Matrix::from_rows(&rows).unwrap();
        let fit = logistic_fit(&m, &labels).unwrap();
        assert!(fit.coefficients[0] > 5.0);
        assert!(fit.coefficients.iter().all(|c| c.is_finite()));
        // the huge coefficient has a huge standard error: Wald cannot call it
        assert!(fit.p_values[0] > 0.05 || !fit.converged);
    }

    #[test]
    fn cholesky_roundtrip() {
        let a = [4.0, 2.0, 2.0, 3.0];
        let l = cholesky(&a, 2).unwrap();
        let x = cholesky_solve(&l, 2, &[2.0, 1.0]);
        assert!((4.0 * x[0] + 2.0 * x[1] - 2.0).abs() < 1e-14);
        assert!((2.0 * x[0] + 3.0 * x[1] - 1.0).abs() < 1e-14);
        let inv = inverse_diagonal(&l, 2);
        assert!((inv[0] - 3.0 / 8.0).abs() < 1e-14);
        assert!((inv[1] - 4.0 / 8.0).abs() < 1e-14);
    }
}
