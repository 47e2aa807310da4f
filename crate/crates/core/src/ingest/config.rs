use serde::Serialize;
use thiserror::Error;

use crate::clockcore::{ClockOptions, SignificanceRule};
use crate::grouping::ClusterSpec;

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_THETA_STEP_DEG: f64 = 5.0;
pub const DEFAULT_CANVAS: (u32, u32) = (900, 600);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("alpha must lie in (0, 1], got {0}")]
    Alpha(f64),
    #[error("top-k must be at least 1")]
    TopK,
    #[error("theta step must lie in (0, 180] degrees, got {0}")]
    ThetaStep(f64),
    #[error("clock scale must be positive, got {0}")]
    Scale(f64),
    #[error("canvas must be at least 100x100 pixels, got {0}x{1}")]
    Canvas(u32, u32),
}

/// Which space clustering runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterSpace {
    /// The (normalized) high-dimensional features.
    #[default]
    X,
    /// The 2D embedding.
    Y,
}

impl std::str::FromStr for ClusterSpace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Self::X),
            "y" => Ok(Self::Y),
            other => Err(format!("unknown cluster space '{other}' (expected 'x' or 'y')")),
        }
    }
}

/// Unvalidated options; `None` means "use the default".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawOptions {
    pub alpha: Option<f64>,
    pub top_k: Option<usize>,
    pub theta_step_deg: Option<f64>,
    pub standardize_x: Option<bool>,
    pub center_y: Option<bool>,
    pub standardize_betas: Option<bool>,
    pub clock_scale: Option<f64>,
    pub significance_rule: Option<SignificanceRule>,
    pub circles: Option<bool>,
    pub cluster: Option<ClusterSpec>,
    pub cluster_space: Option<ClusterSpace>,
    pub seed: Option<u64>,
    pub canvas: Option<(u32, u32)>,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub alpha: f64,
    pub top_k: Option<usize>,
    pub theta_step_deg: f64,
    pub standardize_x: bool,
    pub center_y: bool,
    pub standardize_betas: bool,
    pub clock_scale: f64,
    pub significance_rule: SignificanceRule,
    pub circles: bool,
    #[serde(serialize_with = "serialize_cluster")]
    pub cluster: Option<ClusterSpec>,
    pub cluster_space: ClusterSpace,
    pub seed: u64,
    pub canvas: (u32, u32),
}

fn serialize_cluster<S: serde::Serializer>(c: &Option<ClusterSpec>, s: S) -> Result<S::Ok, S::Error> {
    match c {
        Some(spec) => s.serialize_str(&spec.to_string()),
        None => s.serialize_none(),
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            top_k: None,
            theta_step_deg: DEFAULT_THETA_STEP_DEG,
            standardize_x: true,
            center_y: true,
            standardize_betas: false,
            clock_scale: 1.0,
            significance_rule: SignificanceRule::Or,
            circles: false,
            cluster: None,
            cluster_space: ClusterSpace::X,
            seed: 0,
            canvas: DEFAULT_CANVAS,
        }
    }
}

impl RunConfig {
    /// Number of projection lines over [0°, 180°).
    pub fn sweep_lines(&self) -> usize {
        (180.0 / self.theta_step_deg).round() as usize
    }

    pub fn clock_options(&self) -> ClockOptions {
        ClockOptions {
            alpha: self.alpha,
            top_k: self.top_k,
            standardize_x: self.standardize_x,
            center_y: self.center_y,
            standardize_betas: self.standardize_betas,
            significance_rule: self.significance_rule,
            circles: self.circles,
            sweep_lines: self.sweep_lines(),
            ..ClockOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedConfig {
    pub config: RunConfig,
    pub warnings: Vec<String>,
}

/// Snaps a projection step to one that divides 180° into at least two lines.
///
/// Steps that do not divide 180 are rounded up to the next step that does,
/// i.e. the number of lines is `floor(180 / step)`.
fn snap_theta_step(step: f64) -> (f64, Option<String>) {
    let exact = 180.0 / step;
    let nearest = exact.round();
    if (exact - nearest).abs() <= 1e-9 * exact.max(1.0) && nearest >= 2.0 {
        return (180.0 / nearest, None);
    }
    let lines = exact.floor().max(2.0);
    let snapped = 180.0 / lines;
    (
        snapped,
        Some(format!(
            "theta step {step}° does not divide 180°; using {snapped}° ({lines} projection lines)"
        )),
    )
}

pub fn validate_config(raw: &RawOptions) -> Result<ValidatedConfig, ConfigError> {
    let defaults = RunConfig::default();
    let mut warnings = Vec::new();

    let alpha = raw.alpha.unwrap_or(defaults.alpha);
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ConfigError::Alpha(alpha));
    }
    if raw.top_k == Some(0) {
        return Err(ConfigError::TopK);
    }
    let step = raw.theta_step_deg.unwrap_or(defaults.theta_step_deg);
    if !(step.is_finite() && step > 0.0 && step <= 180.0) {
        return Err(ConfigError::ThetaStep(step));
    }
    let (theta_step_deg, warning) = snap_theta_step(step);
    warnings.extend(warning);
    let clock_scale = raw.clock_scale.unwrap_or(defaults.clock_scale);
    if !(clock_scale.is_finite() && clock_scale > 0.0) {
        return Err(ConfigError::Scale(clock_scale));
    }
    let canvas = raw.canvas.unwrap_or(defaults.canvas);
    if canvas.0 < 100 || canvas.1 < 100 {
        return Err(ConfigError::Canvas(canvas.0, canvas.1));
    }

    Ok(ValidatedConfig {
        config: RunConfig {
            alpha,
            top_k: raw.top_k,
            theta_step_deg,
            standardize_x: raw.standardize_x.unwrap_or(defaults.standardize_x),
            center_y: raw.center_y.unwrap_or(defaults.center_y),
            standardize_betas: raw.standardize_betas.unwrap_or(defaults.standardize_betas),
            clock_scale,
            significance_rule: raw.significance_rule.unwrap_or_default(),
            circles: raw.circles.unwrap_or(defaults.circles),
            cluster: raw.cluster.clone(),
            cluster_space: raw.cluster_space.unwrap_or_default(),
            seed: raw.seed.unwrap_or(defaults.seed),
            canvas,
        },
        warnings,
    })
}
