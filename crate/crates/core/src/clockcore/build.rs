use crate::grouping::GroupingResult;
use crate::ingest::Dataset;
use crate::numstats::{standardize_columns, center_columns, Intercept, LeastSquares, Matrix};

use super::projection::{fit_axis_regressions, refit_sweep, sweep_from_axes};
use super::{
    sort_by_magnitude, CircleSeries, Clock, ClockArrow, ClockError, ClockOptions, ClockVariant,
    SweepMode,
};

/// A clock plus the warnings produced while building it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClockOutcome {
    pub clock: Clock,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalClocks {
    pub clocks: Vec<Clock>,
    pub warnings: Vec<String>,
}

fn validate(options: &ClockOptions) -> Result<(), ClockError> {
    if !(options.alpha >= 0.0 && options.alpha <= 1.0) {
        return Err(ClockError::InvalidOption(format!(
            "alpha must lie in [0, 1], got {}",
            options.alpha
        )));
    }
    if options.top_k == Some(0) {
        return Err(ClockError::InvalidOption("top-k must be at least 1".into()));
    }
    if options.circles && options.sweep_lines < 2 {
        return Err(ClockError::InvalidOption(
            "circles mode needs at least 2 projection lines".into(),
        ));
    }
    if let Some(s) = options.scale {
        if !(s.is_finite() && s > 0.0) {
            return Err(ClockError::InvalidOption(format!("scale must be positive, got {s}")));
        }
    }
    Ok(())
}

fn sample_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if n < 2.0 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Builds one clock over the rows `members` of `x` (n x d) and `y` (n x 2).
pub fn build_clock(
    x: &Matrix,
    y: &Matrix,
    feature_names: &[String],
    members: &[usize],
    options: &ClockOptions,
    label: &str,
) -> Result<ClockOutcome, ClockError> {
    validate(options)?;
    if x.rows() != y.rows() || y.cols() != 2 || feature_names.len() != x.cols() {
        return Err(ClockError::Shape(format!(
            "X is {}x{}, Y is {}x{}, {} feature names",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols(),
            feature_names.len()
        )));
    }
    let d = x.cols();
    let mut warnings = Vec::new();

    if members.len() < 2 {
        return Err(ClockError::GroupTooSmall {
            group: label.to_string(),
            size: members.len(),
            required: 3,
        });
    }
    let xm = x.select_rows(members)?;
    let ym = y.select_rows(members)?;

    let stats = standardize_columns(&xm)?;
    let kept: Vec<usize> = (0..d).filter(|j| !stats.zero_variance.contains(j)).collect();
    let dropped_features: Vec<String> = stats
        .zero_variance
        .iter()
        .map(|&j| feature_names[j].clone())
        .collect();
    for name in &dropped_features {
        warnings.push(format!("feature '{name}' is constant within '{label}' and was dropped"));
    }
    if kept.is_empty() {
        return Err(ClockError::NoFeatures {
            group: label.to_string(),
        });
    }
    let required = kept.len() + 2;
    if members.len() < required {
        return Err(ClockError::GroupTooSmall {
            group: label.to_string(),
            size: members.len(),
            required,
        });
    }

    let design = if options.standardize_x {
        stats.matrix.select_columns(&kept)?
    } else {
        center_columns(&xm).select_columns(&kept)?
    };
    let (target, intercept) = if options.center_y {
        (center_columns(&ym), Intercept::Absorbed)
    } else {
        (ym.clone(), Intercept::None)
    };
    let solver = LeastSquares::with_intercept(&design, intercept).map_err(|source| {
        ClockError::Regression {
            axis_deg: 0,
            source: remap_columns(source, &kept),
        }
    })?;
    let fits = fit_axis_regressions(&solver, &target)?;

    let mut beta0 = fits.at_0.coefficients.clone();
    let mut beta90 = fits.at_90.coefficients.clone();
    let beta_scale = if options.standardize_betas {
        let pooled: Vec<f64> = beta0.iter().chain(&beta90).copied().collect();
        let sd = sample_std(&pooled);
        if sd > 0.0 {
            sd
        } else {
            1.0
        }
    } else {
        1.0
    };
    beta0.iter_mut().for_each(|b| *b /= beta_scale);
    beta90.iter_mut().for_each(|b| *b /= beta_scale);

    let mut features = Vec::with_capacity(d);
    let mut slot = 0;
    for (j, name) in feature_names.iter().enumerate() {
        if kept.get(slot) == Some(&j) {
            let p0 = fits.at_0.p_values[slot];
            let p90 = fits.at_90.p_values[slot];
            let significant = options.significance_rule.decide(p0, p90, options.alpha);
            features.push(ClockArrow::new(name, j, beta0[slot], beta90[slot], p0, p90, significant));
            slot += 1;
        } else {
            features.push(ClockArrow::new(name, j, 0.0, 0.0, 1.0, 1.0, false));
        }
    }

    let mut arrows: Vec<ClockArrow> = features.iter().filter(|a| a.significant).cloned().collect();
    sort_by_magnitude(&mut arrows);
    if let Some(k) = options.top_k {
        arrows.truncate(k);
    }
    if arrows.is_empty() {
        warnings.push(format!("no significant features in '{label}' at alpha = {}", options.alpha));
    }

    let circles = options.circles.then(|| {
        let series = match options.sweep_mode {
            SweepMode::Analytic => sweep_from_axes(&beta0, &beta90, options.sweep_lines),
            SweepMode::Refit => {
                let mut s = refit_sweep(&solver, &target, options.sweep_lines);
                for samples in s.iter_mut() {
                    samples.iter_mut().for_each(|(_, b)| *b /= beta_scale);
                }
                s
            }
        };
        kept.iter()
            .zip(series)
            .map(|(&j, samples)| CircleSeries {
                feature: feature_names[j].clone(),
                feature_index: j,
                samples,
            })
            .collect()
    });

    let anchor = options.anchor.unwrap_or_else(|| {
        let c = ym.column_means();
        (c[0], c[1])
    });
    let scale = options.scale.unwrap_or_else(|| default_scale(&ym));

    Ok(ClockOutcome {
        clock: Clock {
            variant: if options.circles {
                ClockVariant::Circles
            } else {
                ClockVariant::Global
            },
            label: label.to_string(),
            anchor,
            scale,
            arrows,
            features,
            dropped_features,
            members: members.to_vec(),
            circles,
        },
        warnings,
    })
}

fn remap_columns(err: crate::numstats::NumError, kept: &[usize]) -> crate::numstats::NumError {
    match err {
        crate::numstats::NumError::RankDeficient { columns } => {
            crate::numstats::NumError::RankDeficient {
                columns: columns.into_iter().map(|c| kept[c]).collect(),
            }
        }
        other => other,
    }
}

/// Half the bounding-box diagonal of the embedded points; 1 when degenerate.
pub(crate) fn default_scale(y: &Matrix) -> f64 {
    let extent = |col: usize| {
        let v = y.column(col);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let half_diag = 0.5 * extent(0).hypot(extent(1));
    if half_diag > 0.0 {
        half_diag
    } else {
        1.0
    }
}

/// Clock over every point of the dataset.
pub fn build_global_clock(dataset: &Dataset, options: &ClockOptions) -> Result<ClockOutcome, ClockError> {
    let members: Vec<usize> = (0..dataset.n()).collect();
    build_clock(
        dataset.x(),
        dataset.y(),
        dataset.feature_names(),
        &members,
        options,
        "all",
    )
}

/// One clock per non-noise group; undersized groups are skipped with a warning.
pub fn build_local_clocks(
    dataset: &Dataset,
    grouping: &GroupingResult,
    options: &ClockOptions,
) -> Result<LocalClocks, ClockError> {
    validate(options)?;
    let mut clocks = Vec::new();
    let mut warnings = Vec::new();
    let mut reasons = Vec::new();
    for group in &grouping.groups {
        match build_clock(
            dataset.x(),
            dataset.y(),
            dataset.feature_names(),
            &group.members,
            options,
            &group.name,
        ) {
            Ok(mut outcome) => {
                if outcome.clock.variant == ClockVariant::Global {
                    outcome.clock.variant = ClockVariant::Local;
                }
                warnings.append(&mut outcome.warnings);
                clocks.push(outcome.clock);
            }
            Err(err @ ClockError::InvalidOption(_)) => return Err(err),
            Err(err) => {
                warnings.push(format!("skipped group '{}': {err}", group.name));
                reasons.push(err.to_string());
            }
        }
    }
    if clocks.is_empty() {
        if reasons.is_empty() {
            reasons.push("grouping has no non-noise groups".into());
        }
        return Err(ClockError::NoUsableGroups { reasons });
    }
    Ok(LocalClocks { clocks, warnings })
}
