//! Angular projections of the embedding and the regressions built on them.

use crate::numstats::{LeastSquares, Matrix, RegressionFit};

use super::ClockError;

/// Scalar coordinates of the embedded points on the line through the origin
/// at `angle_deg`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionFactor {
    pub angle_deg: f64,
    pub values: Vec<f64>,
}

/// Unit direction `(cos, sin)` for an angle in degrees. Exact on the axes.
pub(crate) fn unit(angle_deg: f64) -> (f64, f64) {
    let a = angle_deg.rem_euclid(360.0);
    match a {
        0.0 => (1.0, 0.0),
        90.0 => (0.0, 1.0),
        180.0 => (-1.0, 0.0),
        270.0 => (0.0, -1.0),
        _ => {
            let r = a.to_radians();
            (r.cos(), r.sin())
        }
    }
}

/// Projects each row `(x, y)` of a centered n x 2 embedding onto the line at `angle_deg`.
pub fn project_at_angle(y_centered: &Matrix, angle_deg: f64) -> ProjectionFactor {
    assert_eq!(y_centered.cols(), 2, "embedding must have two columns");
    let (c, s) = unit(angle_deg);
    let values = (0..y_centered.rows())
        .map(|i| {
            let row = y_centered.row(i);
            if s == 0.0 {
                row[0] * c
            } else if c == 0.0 {
                row[1] * s
            } else {
                row[0] * c + row[1] * s
            }
        })
        .collect();
    ProjectionFactor { angle_deg, values }
}

/// The two axis-aligned fits: target = x coordinate (0°) and y coordinate (90°).
#[derive(Debug, Clone, PartialEq)]
pub struct AxisFits {
    pub at_0: RegressionFit,
    pub at_90: RegressionFit,
}

/// Fits both axis regressions against one shared factorization of the design.
pub fn fit_axis_regressions(
    solver: &LeastSquares,
    y_centered: &Matrix,
) -> Result<AxisFits, ClockError> {
    if y_centered.rows() != solver.design().rows() {
        return Err(ClockError::Shape(format!(
            "embedding has {} rows, design has {}",
            y_centered.rows(),
            solver.design().rows()
        )));
    }
    let at_0 = solver.fit(&project_at_angle(y_centered, 0.0).values);
    let at_90 = solver.fit(&project_at_angle(y_centered, 90.0).values);
    Ok(AxisFits { at_0, at_90 })
}

/// Factorizes `x_std` and fits both axes, tagging failures with the axis.
pub fn fit_axis_regressions_from(
    x_std: &Matrix,
    y_centered: &Matrix,
) -> Result<AxisFits, ClockError> {
    let solver = LeastSquares::new(x_std).map_err(|source| ClockError::Regression {
        axis_deg: 0,
        source,
    })?;
    fit_axis_regressions(&solver, y_centered)
}

/// Largest coefficient over all projection angles, from the two axis coefficients.
///
/// Returns `(magnitude, angle_deg)` with the angle of the vector
/// `(beta0, beta90)` in `[0, 360)`; the zero vector maps to angle 0.
pub fn max_contribution(beta0: f64, beta90: f64) -> (f64, f64) {
    let magnitude = beta0.hypot(beta90);
    if magnitude == 0.0 {
        return (0.0, 0.0);
    }
    let mut angle = beta90.atan2(beta0).to_degrees();
    if angle < 0.0 {
        angle += 360.0;
    }
    if angle >= 360.0 {
        angle -= 360.0;
    }
    (magnitude, angle)
}

/// Projection angles `i * 180 / m` for `i` in `0..m`.
pub fn sweep_angles(m: usize) -> Vec<f64> {
    (0..m).map(|i| i as f64 * 180.0 / m as f64).collect()
}

/// Coefficient of one feature at angle `theta` from its two axis coefficients.
pub fn coefficient_at(beta0: f64, beta90: f64, angle_deg: f64) -> f64 {
    let (c, s) = unit(angle_deg);
    beta0 * c + beta90 * s
}

/// Per-feature `(angle_deg, coefficient)` samples over `m` projection lines,
/// computed from the axis fits by linearity of the least-squares solution.
pub fn circle_sweep(
    x_std: &Matrix,
    y_centered: &Matrix,
    m: usize,
) -> Result<Vec<Vec<(f64, f64)>>, ClockError> {
    check_lines(m)?;
    let fits = fit_axis_regressions_from(x_std, y_centered)?;
    Ok(sweep_from_axes(
        &fits.at_0.coefficients,
        &fits.at_90.coefficients,
        m,
    ))
}

pub(crate) fn sweep_from_axes(beta0: &[f64], beta90: &[f64], m: usize) -> Vec<Vec<(f64, f64)>> {
    let angles = sweep_angles(m);
    beta0
        .iter()
        .zip(beta90)
        .map(|(&b0, &b90)| {
            angles
                .iter()
                .map(|&a| (a, coefficient_at(b0, b90, a)))
                .collect()
        })
        .collect()
}

/// Same as [`circle_sweep`] but refits the regression at every angle.
pub fn circle_sweep_refit(
    x_std: &Matrix,
    y_centered: &Matrix,
    m: usize,
) -> Result<Vec<Vec<(f64, f64)>>, ClockError> {
    check_lines(m)?;
    let solver = LeastSquares::new(x_std).map_err(|source| ClockError::Regression {
        axis_deg: 0,
        source,
    })?;
    Ok(refit_sweep(&solver, y_centered, m))
}

pub(crate) fn refit_sweep(solver: &LeastSquares, y_centered: &Matrix, m: usize) -> Vec<Vec<(f64, f64)>> {
    let d = solver.design().cols();
    let mut out = vec![Vec::with_capacity(m); d];
    for angle in sweep_angles(m) {
        let beta = solver.solve(&project_at_angle(y_centered, angle).values);
        for (series, b) in out.iter_mut().zip(beta) {
            series.push((angle, b));
        }
    }
    out
}

fn check_lines(m: usize) -> Result<(), ClockError> {
    if m < 2 {
        return Err(ClockError::InvalidOption(format!(
            "at least 2 projection lines are required, got {m}"
        )));
    }
    Ok(())
}
