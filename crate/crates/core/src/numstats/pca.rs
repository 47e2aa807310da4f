use super::{center_columns, Matrix, NumError};

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Two-component principal component model.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    /// Unit-norm loading vectors, one per component, each of length d.
    pub components: [Vec<f64>; 2],
    pub explained_variance: [f64; 2],
    pub mean: Vec<f64>,
}

impl PcaModel {
    /// Projects rows of `x` onto the two components (n x 2 scores).
    pub fn scores(&self, x: &Matrix) -> Matrix {
        let (n, d) = x.shape();
        assert_eq!(d, self.mean.len(), "feature count mismatch");
        let mut data = Vec::with_capacity(n * 2);
        for i in 0..n {
            let row = x.row(i);
            for comp in &self.components {
                data.push(
                    row.iter()
                        .zip(&self.mean)
                        .zip(comp)
                        .map(|((v, m), w)| (v - m) * w)
                        .sum(),
                );
            }
        }
        Matrix::from_row_major(n, 2, data).expect("finite scores")
    }

    /// Loading of feature `j` as a 2D vector (its row of the loading matrix).
    pub fn loading(&self, j: usize) -> (f64, f64) {
        (self.components[0][j], self.components[1][j])
    }
}

/// Sample covariance (n - 1 denominator) of the columns of `x`.
pub fn covariance(x: &Matrix) -> Matrix {
    let centered = center_columns(x);
    let (n, d) = centered.shape();
    let mut cov = Matrix::zeros(d, d);
    let denom = (n as f64 - 1.0).max(1.0);
    for a in 0..d {
        for b in a..d {
            let s: f64 = (0..n).map(|i| centered.get(i, a) * centered.get(i, b)).sum::<f64>() / denom;
            cov.set(a, b, s);
            cov.set(b, a, s);
        }
    }
    cov
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues (descending) and the matching eigenvectors as columns
/// of the returned matrix.
pub fn symmetric_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    let d = m.rows();
    assert_eq!(d, m.cols(), "matrix must be square");
    let mut a = m.clone();
    let mut v = Matrix::zeros(d, d);
    for i in 0..d {
        v.set(i, i, 1.0);
    }
    let frob = a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = JACOBI_TOL * frob.max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..d)
            .flat_map(|p| (0..d).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a.get(p, q).powi(2))
            .sum::<f64>()
            .sqrt();
        if off < tol {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..d {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..d {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..d {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a.get(j, j).total_cmp(&a.get(i, i)).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = v.select_columns(&order).expect("valid permutation");
    (values, vectors)
}

/// Top-two principal components of `x` with a deterministic sign convention:
/// the largest-magnitude entry of each loading vector is positive.
pub fn pca_2d(x: &Matrix) -> Result<PcaModel, NumError> {
    let (n, d) = x.shape();
    if d < 2 {
        return Err(NumError::TooFewFeatures { found: d, required: 2 });
    }
    if n < 3 {
        return Err(NumError::InsufficientObservations { n, required: 3 });
    }
    let (values, vectors) = symmetric_eigen(&covariance(x));
    let mut components: [Vec<f64>; 2] = [vectors.column(0), vectors.column(1)];
    for comp in components.iter_mut() {
        let norm = comp.iter().map(|v| v * v).sum::<f64>().sqrt();
        comp.iter_mut().for_each(|v| *v /= norm);
        let lead = comp
            .iter()
            .copied()
            .fold(0.0_f64, |best, v| if v.abs() > best.abs() { v } else { best });
        if lead < 0.0 {
            comp.iter_mut().for_each(|v| *v = -*v);
        }
    }
    Ok(PcaModel {
        components,
        explained_variance: [values[0].max(0.0), values[1].max(0.0)],
        mean: x.column_means(),
    })
}
