//! Numerical kernel: matrices, column normalization, least squares,
//! Student-t tails and a two-component PCA reference.

mod matrix;
mod ols;
mod pca;
mod special;

pub use matrix::Matrix;
pub use ols::{ols_fit, Intercept, LeastSquares, RegressionFit, EXACT_FIT_TOL, RANK_TOL};
pub use pca::{covariance, pca_2d, symmetric_eigen, PcaModel};
pub use special::{
    ln_beta, normal_two_sided_p, regularized_incomplete_beta, student_t_two_sided_p,
};

use thiserror::Error;

/// Columns whose sample standard deviation is at or below this (relative to
/// `max(1, |mean|)`) are treated as constant.
pub const ZERO_VARIANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("expected {expected} values, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("rows have different lengths")]
    RaggedRows,
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("insufficient observations: {n} rows, at least {required} required")]
    InsufficientObservations { n: usize, required: usize },
    #[error("rank-deficient design matrix; linearly dependent columns {columns:?}")]
    RankDeficient { columns: Vec<usize> },
    #[error("at least {required} features required, found {found}")]
    TooFewFeatures { found: usize, required: usize },
}

/// Result of [`standardize_columns`].
#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    pub matrix: Matrix,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// Columns that were only centered because their spread is numerically zero.
    pub zero_variance: Vec<usize>,
}

fn mean_and_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let ss: f64 = values.map(|v| (v - mean).powi(2)).sum();
    let std = if n > 1.0 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
    (mean, std)
}

/// Z-scores every column using the sample (n - 1) standard deviation.
pub fn standardize_columns(m: &Matrix) -> Result<Standardized, NumError> {
    let (n, d) = m.shape();
    if n < 2 {
        return Err(NumError::InsufficientObservations { n, required: 2 });
    }
    let mut out = m.clone();
    let mut means = Vec::with_capacity(d);
    let mut stds = Vec::with_capacity(d);
    let mut zero_variance = Vec::new();
    for j in 0..d {
        let (mean, std) = mean_and_std((0..n).map(|i| m.get(i, j)));
        let constant = std <= ZERO_VARIANCE_TOL * mean.abs().max(1.0);
        if constant {
            zero_variance.push(j);
        }
        for i in 0..n {
            let centered = m.get(i, j) - mean;
            out.set(i, j, if constant { centered } else { centered / std });
        }
        means.push(mean);
        stds.push(std);
    }
    Ok(Standardized {
        matrix: out,
        means,
        stds,
        zero_variance,
    })
}

/// Subtracts each column's mean.
pub fn center_columns(m: &Matrix) -> Matrix {
    let means = m.column_means();
    let mut out = m.clone();
    for i in 0..m.rows() {
        for (j, mean) in means.iter().enumerate() {
            out.set(i, j, m.get(i, j) - mean);
        }
    }
    out
}
