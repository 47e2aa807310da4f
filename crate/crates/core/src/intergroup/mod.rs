//! Inter-group clocks: a logistic regression between the two groups at the
//! ends of each MST edge, drawn along the segment joining their centers.

mod logistic;

pub use logistic::{logistic_fit, logistic_fit_with, penalized_gradient, LogisticFit, LogisticOptions};

use thiserror::Error;

use crate::clockcore::{ClockArrow, ClockOptions};
use crate::grouping::{GroupingResult, MstEdges};
use crate::ingest::Dataset;
use crate::numstats::{center_columns, standardize_columns, NumError};

/// Smallest group that can sit at either end of an inter-group edge.
pub const MIN_GROUP_SIZE: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntergroupError {
    #[error("logistic regression needs both classes present")]
    SingleClass,
    #[error("insufficient observations: {n} rows, at least {required} required")]
    InsufficientObservations { n: usize, required: usize },
    #[error("inter-group clocks need at least 2 groups, found {found}")]
    TooFewGroups { found: usize },
    #[error("no usable MST edges: {}", .reasons.join("; "))]
    NoUsableEdges { reasons: Vec<String> },
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntergroupClock {
    /// Group ids `(a, b)`; class 0 is `a`, class 1 is `b`.
    pub edge: (usize, usize),
    pub group_names: (String, String),
    pub centers: ((f64, f64), (f64, f64)),
    /// Midpoint of the segment joining the two centers.
    pub anchor: (f64, f64),
    /// Direction from center `a` to center `b`, in `[0, 360)`.
    pub axis_angle_deg: f64,
    /// Half the distance between the centers.
    pub scale: f64,
    /// Significant features as arrows along the axis, `|coefficient|`-descending.
    pub arrows: Vec<ClockArrow>,
    /// Every feature in column order.
    pub features: Vec<ClockArrow>,
    /// Signed coefficient per feature along the a→b axis (0 for dropped features).
    pub coefficients: Vec<f64>,
    pub dropped_features: Vec<String>,
    pub fit: LogisticFit,
    pub member_counts: (usize, usize),
    /// The fitted linear predictor splits the two groups perfectly.
    pub separable: bool,
}

impl IntergroupClock {
    /// Signed length of an arrow along the a→b axis.
    pub fn axis_component(&self, arrow: &ClockArrow) -> f64 {
        let (c, s) = crate::clockcore::unit(self.axis_angle_deg);
        arrow.beta0 * c + arrow.beta90 * s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntergroupClocks {
    pub clocks: Vec<IntergroupClock>,
    pub warnings: Vec<String>,
}

fn build_edge(
    dataset: &Dataset,
    grouping: &GroupingResult,
    a: usize,
    b: usize,
    options: &ClockOptions,
    warnings: &mut Vec<String>,
) -> Result<IntergroupClock, IntergroupError> {
    let ga = &grouping.groups[a];
    let gb = &grouping.groups[b];
    let d = dataset.d();
    let required = (d + 2).max(MIN_GROUP_SIZE);
    for g in [ga, gb] {
        if g.members.len() < required {
            return Err(IntergroupError::InsufficientObservations {
                n: g.members.len(),
                required,
            });
        }
    }

    let rows: Vec<usize> = ga.members.iter().chain(&gb.members).copied().collect();
    let labels: Vec<bool> = std::iter::repeat_n(false, ga.members.len())
        .chain(std::iter::repeat_n(true, gb.members.len()))
        .collect();
    let xm = dataset.x().select_rows(&rows)?;
    let stats = standardize_columns(&xm)?;
    let kept: Vec<usize> = (0..d).filter(|j| !stats.zero_variance.contains(j)).collect();
    let names = dataset.feature_names();
    let dropped_features: Vec<String> = stats.zero_variance.iter().map(|&j| names[j].clone()).collect();
    for name in &dropped_features {
        warnings.push(format!(
            "feature '{name}' is constant across '{}' and '{}' and was dropped",
            ga.name, gb.name
        ));
    }
    if kept.is_empty() {
        return Err(IntergroupError::Shape("every feature is constant".into()));
    }
    let design = if options.standardize_x {
        stats.matrix.select_columns(&kept)?
    } else {
        center_columns(&xm).select_columns(&kept)?
    };
    let fit = logistic_fit(&design, &labels)?;
    if !fit.converged {
        warnings.push(format!(
            "logistic fit between '{}' and '{}' did not converge after {} iterations (groups may be separable)",
            ga.name, gb.name, fit.iterations
        ));
    }

    let separable = perfectly_separated(&design, &labels, &fit);
    if separable {
        warnings.push(format!(
            "groups '{}' and '{}' are linearly separable; Wald p-values are unreliable",
            ga.name, gb.name
        ));
    }

    let (dx, dy) = (gb.center.0 - ga.center.0, gb.center.1 - ga.center.1);
    let length = dx.hypot(dy);
    let axis_angle_deg = if length > 0.0 {
        dy.atan2(dx).to_degrees().rem_euclid(360.0)
    } else {
        0.0
    };
    let (c, s) = crate::clockcore::unit(axis_angle_deg);

    let mut features = Vec::with_capacity(d);
    let mut coefficients = vec![0.0; d];
    let mut slot = 0;
    for (j, name) in names.iter().enumerate() {
        if kept.get(slot) == Some(&j) {
            let coef = fit.coefficients[slot];
            let p = fit.p_values[slot];
            coefficients[j] = coef;
            let significant = options.significance_rule.decide(p, p, options.alpha);
            features.push(ClockArrow::new(name, j, coef * c, coef * s, p, p, significant));
            slot += 1;
        } else {
            features.push(ClockArrow::new(name, j, 0.0, 0.0, 1.0, 1.0, false));
        }
    }
    let mut arrows: Vec<ClockArrow> = features.iter().filter(|a| a.significant).cloned().collect();
    crate::clockcore::sort_by_magnitude(&mut arrows);
    if let Some(k) = options.top_k {
        arrows.truncate(k);
    }
    if arrows.is_empty() {
        warnings.push(format!(
            "no significant features between '{}' and '{}' at alpha = {}",
            ga.name, gb.name, options.alpha
        ));
    }

    Ok(IntergroupClock {
        edge: (a, b),
        group_names: (ga.name.clone(), gb.name.clone()),
        centers: (ga.center, gb.center),
        anchor: (
            0.5 * (ga.center.0 + gb.center.0),
            0.5 * (ga.center.1 + gb.center.1),
        ),
        axis_angle_deg,
        scale: if length > 0.0 { 0.5 * length } else { 1.0 },
        arrows,
        features,
        coefficients,
        dropped_features,
        fit,
        member_counts: (ga.members.len(), gb.members.len()),
        separable,
    })
}

fn perfectly_separated(design: &crate::numstats::Matrix, labels: &[bool], fit: &LogisticFit) -> bool {
    let mut max_neg = f64::NEG_INFINITY;
    let mut min_pos = f64::INFINITY;
    for (i, &l) in labels.iter().enumerate() {
        let eta: f64 = fit.intercept
            + design
                .row(i)
                .iter()
                .zip(&fit.coefficients)
                .map(|(x, b)| x * b)
                .sum::<f64>();
        if l {
            min_pos = min_pos.min(eta);
        } else {
            max_neg = max_neg.max(eta);
        }
    }
    max_neg < min_pos
}

/// One clock per MST edge, in edge order. Undersized edges are skipped with a warning.
pub fn build_intergroup_clocks(
    dataset: &Dataset,
    grouping: &GroupingResult,
    mst: &MstEdges,
    options: &ClockOptions,
) -> Result<IntergroupClocks, IntergroupError> {
    if !(0.0..=1.0).contains(&options.alpha) {
        return Err(IntergroupError::InvalidOption(format!(
            "alpha must lie in [0, 1], got {}",
            options.alpha
        )));
    }
    if grouping.groups.len() < 2 {
        return Err(IntergroupError::TooFewGroups {
            found: grouping.groups.len(),
        });
    }
    let mut clocks = Vec::new();
    let mut warnings = Vec::new();
    let mut reasons = Vec::new();
    for edge in &mst.edges {
        match build_edge(dataset, grouping, edge.a, edge.b, options, &mut warnings) {
            Ok(clock) => clocks.push(clock),
            Err(err) => {
                let msg = format!(
                    "skipped edge '{}'-'{}': {err}",
                    grouping.groups[edge.a].name, grouping.groups[edge.b].name
                );
                reasons.push(msg.clone());
                warnings.push(msg);
            }
        }
    }
    if clocks.is_empty() {
        return Err(IntergroupError::NoUsableEdges { reasons });
    }
    Ok(IntergroupClocks { clocks, warnings })
}
