//! The Feature Clock engine.
//!
//! For every high-dimensional feature the engine regresses the embedding's
//! x and y coordinates (projections at 0° and 90°) on the standardized
//! features. The pair `(beta0, beta90)` is the feature's largest contribution
//! over all projection angles: its length is the maximal coefficient and its
//! direction is where the feature increases in the embedding.

mod build;
mod projection;

pub use build::{build_clock, build_global_clock, build_local_clocks, ClockOutcome, LocalClocks};
pub use projection::{
    circle_sweep, circle_sweep_refit, coefficient_at, fit_axis_regressions,
    fit_axis_regressions_from, max_contribution, project_at_angle, sweep_angles, AxisFits,
    ProjectionFactor,
};
pub(crate) use projection::unit;

use serde::Serialize;
use thiserror::Error;

use crate::numstats::NumError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClockError {
    #[error("regression at {axis_deg}° failed: {source}")]
    Regression { axis_deg: u32, source: NumError },
    #[error("group too small for clock: '{group}' has {size} points, {required} required")]
    GroupTooSmall {
        group: String,
        size: usize,
        required: usize,
    },
    #[error("no usable features in '{group}': every feature is constant")]
    NoFeatures { group: String },
    #[error("no usable groups: {}", .reasons.join("; "))]
    NoUsableGroups { reasons: Vec<String> },
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockVariant {
    Global,
    Local,
    Intergroup,
    Circles,
}

/// How the two axis p-values combine into one significance decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignificanceRule {
    /// Significant when either axis fit is significant.
    #[default]
    Or,
    /// Significant only when both axis fits are significant.
    And,
}

impl SignificanceRule {
    pub fn decide(self, p0: f64, p90: f64, alpha: f64) -> bool {
        match self {
            SignificanceRule::Or => p0 < alpha || p90 < alpha,
            SignificanceRule::And => p0 < alpha && p90 < alpha,
        }
    }
}

impl std::str::FromStr for SignificanceRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "or" => Ok(Self::Or),
            "and" => Ok(Self::And),
            other => Err(format!("unknown significance rule '{other}' (expected 'or' or 'and')")),
        }
    }
}

/// How circle-mode samples are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// From the two axis fits via `beta(θ) = beta0 cos θ + beta90 sin θ`.
    #[default]
    Analytic,
    /// One least-squares solve per projection angle.
    Refit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClockOptions {
    pub alpha: f64,
    pub top_k: Option<usize>,
    pub standardize_x: bool,
    pub center_y: bool,
    pub standardize_betas: bool,
    pub significance_rule: SignificanceRule,
    pub circles: bool,
    /// Number of projection lines over [0°, 180°) in circles mode.
    pub sweep_lines: usize,
    pub sweep_mode: SweepMode,
    pub anchor: Option<(f64, f64)>,
    pub scale: Option<f64>,
}

impl Default for ClockOptions {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            top_k: None,
            standardize_x: true,
            center_y: true,
            standardize_betas: false,
            significance_rule: SignificanceRule::Or,
            circles: false,
            sweep_lines: 36,
            sweep_mode: SweepMode::Analytic,
            anchor: None,
            scale: None,
        }
    }
}

/// One feature's contribution to a clock.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClockArrow {
    pub feature: String,
    /// Column of the feature in the input matrix.
    pub feature_index: usize,
    pub beta0: f64,
    pub beta90: f64,
    pub magnitude: f64,
    pub angle_deg: f64,
    pub p0: f64,
    pub p90: f64,
    pub significant: bool,
}

impl ClockArrow {
    pub fn new(
        feature: impl Into<String>,
        feature_index: usize,
        beta0: f64,
        beta90: f64,
        p0: f64,
        p90: f64,
        significant: bool,
    ) -> Self {
        let (magnitude, angle_deg) = max_contribution(beta0, beta90);
        Self {
            feature: feature.into(),
            feature_index,
            beta0,
            beta90,
            magnitude,
            angle_deg,
            p0,
            p90,
            significant,
        }
    }
}

/// Coefficient samples over projection angles for one feature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleSeries {
    pub feature: String,
    pub feature_index: usize,
    /// `(angle_deg, coefficient)` pairs.
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clock {
    pub variant: ClockVariant,
    /// Group name, or "all" for the global clock.
    pub label: String,
    pub anchor: (f64, f64),
    pub scale: f64,
    /// Significant arrows, magnitude-descending, truncated to top-k.
    pub arrows: Vec<ClockArrow>,
    /// Every input feature in column order, significant or not.
    pub features: Vec<ClockArrow>,
    /// Features dropped because they are constant within the members.
    pub dropped_features: Vec<String>,
    pub members: Vec<usize>,
    pub circles: Option<Vec<CircleSeries>>,
}

/// Stable magnitude-descending order; earlier input columns win ties.
pub(crate) fn sort_by_magnitude(arrows: &mut [ClockArrow]) {
    arrows.sort_by(|a, b| {
        b.magnitude
            .total_cmp(&a.magnitude)
            .then(a.feature_index.cmp(&b.feature_index))
    });
}
