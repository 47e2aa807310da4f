//! Least squares through a column-pivoted Householder QR factorization.
//!
//! The design matrix is expected to be centered (the intercept is absorbed),
//! so the default residual degrees of freedom are `n - d - 1`.

use super::special::student_t_two_sided_p;
use super::{Matrix, NumError};

/// Relative tolerance on `|R_kk|` below which a column is declared dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Relative residual variance below which a fit is treated as exact.
pub const EXACT_FIT_TOL: f64 = 1e-14;

/// Coefficient magnitude that counts as "nonzero" in an exact fit.
pub const EXACT_FIT_BETA_TOL: f64 = 1e-10;

/// Output of an ordinary least squares fit.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionFit {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub dof: usize,
    pub residual_variance: f64,
}

impl RegressionFit {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// True when the exact-fit rule replaced the t-test p-values.
    pub fn is_exact(&self, y_mean_square: f64) -> bool {
        self.residual_variance < EXACT_FIT_TOL * (y_mean_square + 1.0)
    }
}

/// How the residual degrees of freedom are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intercept {
    /// Data were centered beforehand; one extra degree of freedom is spent.
    Absorbed,
    /// Regression through the origin.
    None,
}

impl Intercept {
    fn extra(self) -> usize {
        match self {
            Intercept::Absorbed => 1,
            Intercept::None => 0,
        }
    }
}

/// A factorized design matrix that can be fitted against many targets.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    design: Matrix,
    /// Householder reflectors stored column-wise below the diagonal.
    qr: Matrix,
    /// Scalar factors `2 / v^T v` for each reflector.
    tau: Vec<f64>,
    /// Diagonal of R.
    r_diag: Vec<f64>,
    /// `perm[k]` is the original column sitting at pivot position `k`.
    perm: Vec<usize>,
    /// Diagonal of `(X^T X)^{-1}` in original column order.
    xtx_inv_diag: Vec<f64>,
    intercept: Intercept,
}

impl LeastSquares {
    /// Factorizes `x` assuming an absorbed intercept.
    pub fn new(x: &Matrix) -> Result<Self, NumError> {
        Self::with_intercept(x, Intercept::Absorbed)
    }

    pub fn with_intercept(x: &Matrix, intercept: Intercept) -> Result<Self, NumError> {
        let (n, d) = x.shape();
        let required = d + 1 + intercept.extra();
        if n < required {
            return Err(NumError::InsufficientObservations { n, required });
        }

        let mut a = x.clone();
        let mut perm: Vec<usize> = (0..d).collect();
        let mut tau = vec![0.0; d];
        let mut r_diag = vec![0.0; d];
        let scale = x.max_column_norm();
        let threshold = RANK_TOL * scale;

        for k in 0..d {
            // pivot on the largest remaining column norm
            let mut best = k;
            let mut best_norm = -1.0;
            for j in k..d {
                let norm: f64 = (k..n).map(|i| a.get(i, j).powi(2)).sum();
                if norm > best_norm {
                    best_norm = norm;
                    best = j;
                }
            }
            if best != k {
                for i in 0..n {
                    let tmp = a.get(i, k);
                    a.set(i, k, a.get(i, best));
                    a.set(i, best, tmp);
                }
                perm.swap(k, best);
            }

            let norm = best_norm.max(0.0).sqrt();
            if norm <= threshold || scale == 0.0 {
                let mut columns: Vec<usize> = perm[k..].to_vec();
                columns.sort_unstable();
                return Err(NumError::RankDeficient { columns });
            }

            let head = a.get(k, k);
            let alpha = if head >= 0.0 { -norm } else { norm };
            // v = x - alpha e1, stored in place
            a.set(k, k, head - alpha);
            let vtv: f64 = (k..n).map(|i| a.get(i, k).powi(2)).sum();
            tau[k] = if vtv > 0.0 { 2.0 / vtv } else { 0.0 };
            r_diag[k] = alpha;

            for j in (k + 1)..d {
                let dot: f64 = (k..n).map(|i| a.get(i, k) * a.get(i, j)).sum();
                let f = tau[k] * dot;
                for i in k..n {
                    let v = a.get(i, j) - f * a.get(i, k);
                    a.set(i, j, v);
                }
            }
        }

        let mut ls = Self {
            design: x.clone(),
            qr: a,
            tau,
            r_diag,
            perm,
            xtx_inv_diag: Vec::new(),
            intercept,
        };
        ls.xtx_inv_diag = ls.compute_xtx_inv_diag();
        Ok(ls)
    }

    pub fn design(&self) -> &Matrix {
        &self.design
    }

    /// Residual degrees of freedom.
    pub fn dof(&self) -> usize {
        let (n, d) = self.design.shape();
        n - d - self.intercept.extra()
    }

    #[inline]
    fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.r_diag[i]
        } else {
            self.qr.get(i, j)
        }
    }

    /// diag(R^{-1} R^{-T}) mapped back through the column permutation.
    fn compute_xtx_inv_diag(&self) -> Vec<f64> {
        let d = self.design.cols();
        // invert the upper-triangular R column by column
        let mut rinv = vec![0.0; d * d];
        for j in 0..d {
            rinv[j * d + j] = 1.0 / self.r(j, j);
            for i in (0..j).rev() {
                let s: f64 = ((i + 1)..=j).map(|l| self.r(i, l) * rinv[l * d + j]).sum();
                rinv[i * d + j] = -s / self.r(i, i);
            }
        }
        let mut out = vec![0.0; d];
        for k in 0..d {
            let row_sq: f64 = (k..d).map(|l| rinv[k * d + l].powi(2)).sum();
            out[self.perm[k]] = row_sq;
        }
        out
    }

    /// Least-squares coefficients for target `y`, in original column order.
    pub fn solve(&self, y: &[f64]) -> Vec<f64> {
        let (n, d) = self.design.shape();
        assert_eq!(y.len(), n, "target length must match the design rows");
        let mut qty = y.to_vec();
        for k in 0..d {
            let dot: f64 = (k..n).map(|i| self.qr.get(i, k) * qty[i]).sum();
            let f = self.tau[k] * dot;
            for (i, q) in qty.iter_mut().enumerate().skip(k) {
                *q -= f * self.qr.get(i, k);
            }
        }
        let mut z = vec![0.0; d];
        for i in (0..d).rev() {
            let s: f64 = ((i + 1)..d).map(|j| self.r(i, j) * z[j]).sum();
            z[i] = (qty[i] - s) / self.r(i, i);
        }
        let mut beta = vec![0.0; d];
        for (k, &col) in self.perm.iter().enumerate() {
            beta[col] = z[k];
        }
        beta
    }

    /// Full fit with standard errors, t statistics and two-sided p-values.
    pub fn fit(&self, y: &[f64]) -> RegressionFit {
        let beta = self.solve(y);
        let fitted = self.design.mul_vec(&beta);
        let rss: f64 = y.iter().zip(&fitted).map(|(a, b)| (a - b).powi(2)).sum();
        let dof = self.dof();
        let residual_variance = rss / dof as f64;
        let y_mean_square = y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64;
        let exact = residual_variance < EXACT_FIT_TOL * (y_mean_square + 1.0);

        let mut std_errors = Vec::with_capacity(beta.len());
        let mut t_stats = Vec::with_capacity(beta.len());
        let mut p_values = Vec::with_capacity(beta.len());
        for (j, &b) in beta.iter().enumerate() {
            let se = (residual_variance * self.xtx_inv_diag[j]).sqrt();
            let t = if se > 0.0 {
                b / se
            } else if b == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(b)
            };
            let p = if exact {
                if b.abs() > EXACT_FIT_BETA_TOL {
                    0.0
                } else {
                    1.0
                }
            } else {
                student_t_two_sided_p(t, dof)
            };
            std_errors.push(se);
            t_stats.push(t);
            p_values.push(p);
        }

        RegressionFit {
            coefficients: beta,
            std_errors,
            t_stats,
            p_values,
            dof,
            residual_variance,
        }
    }
}

/// Ordinary least squares of a centered target on a centered design.
pub fn ols_fit(x: &Matrix, y: &[f64]) -> Result<RegressionFit, NumError> {
    if y.len() != x.rows() {
        return Err(NumError::ShapeMismatch {
            expected: x.rows(),
            found: y.len(),
        });
    }
    Ok(LeastSquares::new(x)?.fit(y))
}
