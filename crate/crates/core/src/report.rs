//! Machine-readable record of every computed clock.
//!
//! Serialized JSON has sorted object keys and every float rounded to 12
//! significant digits; non-finite floats become `null`.

use serde::Serialize;
use serde_json::Value;

use crate::clockcore::{Clock, ClockArrow, ClockVariant};
use crate::grouping::{GroupingResult, GroupingSource, MstEdges};
use crate::ingest::{Dataset, RunConfig};
use crate::intergroup::IntergroupClock;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "feature-clock";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrowRecord {
    pub feature: String,
    pub feature_index: usize,
    pub angle_deg: f64,
    pub magnitude: f64,
    pub beta0: f64,
    pub beta90: f64,
    pub p0: f64,
    pub p90: f64,
    pub significant: bool,
}

impl From<&ClockArrow> for ArrowRecord {
    fn from(a: &ClockArrow) -> Self {
        Self {
            feature: a.feature.clone(),
            feature_index: a.feature_index,
            angle_deg: a.angle_deg,
            magnitude: a.magnitude,
            beta0: a.beta0,
            beta90: a.beta90,
            p0: a.p0,
            p90: a.p90,
            significant: a.significant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleRecord {
    pub feature: String,
    /// `[angle_deg, coefficient]` pairs.
    pub samples: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeRecord {
    pub a: usize,
    pub b: usize,
    pub group_a: String,
    pub group_b: String,
    pub axis_angle_deg: f64,
    pub converged: bool,
    pub separable: bool,
    pub iterations: usize,
    pub intercept: f64,
    /// Signed coefficient per feature along the a→b axis.
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClockRecord {
    pub variant: ClockVariant,
    pub label: String,
    pub member_count: usize,
    pub anchor: [f64; 2],
    pub scale: f64,
    pub arrows: Vec<ArrowRecord>,
    pub features: Vec<ArrowRecord>,
    pub dropped_features: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circles: Option<Vec<CircleRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<EdgeRecord>,
}

impl From<&Clock> for ClockRecord {
    fn from(c: &Clock) -> Self {
        Self {
            variant: c.variant,
            label: c.label.clone(),
            member_count: c.members.len(),
            anchor: [c.anchor.0, c.anchor.1],
            scale: c.scale,
            arrows: c.arrows.iter().map(ArrowRecord::from).collect(),
            features: c.features.iter().map(ArrowRecord::from).collect(),
            dropped_features: c.dropped_features.clone(),
            circles: c.circles.as_ref().map(|series| {
                series
                    .iter()
                    .map(|s| CircleRecord {
                        feature: s.feature.clone(),
                        samples: s.samples.iter().map(|&(a, b)| [a, b]).collect(),
                    })
                    .collect()
            }),
            edge: None,
        }
    }
}

impl From<&IntergroupClock> for ClockRecord {
    fn from(c: &IntergroupClock) -> Self {
        Self {
            variant: ClockVariant::Intergroup,
            label: format!("{} -> {}", c.group_names.0, c.group_names.1),
            member_count: c.member_counts.0 + c.member_counts.1,
            anchor: [c.anchor.0, c.anchor.1],
            scale: c.scale,
            arrows: c.arrows.iter().map(ArrowRecord::from).collect(),
            features: c.features.iter().map(ArrowRecord::from).collect(),
            dropped_features: c.dropped_features.clone(),
            circles: None,
            edge: Some(EdgeRecord {
                a: c.edge.0,
                b: c.edge.1,
                group_a: c.group_names.0.clone(),
                group_b: c.group_names.1.clone(),
                axis_angle_deg: c.axis_angle_deg,
                converged: c.fit.converged,
                separable: c.separable,
                iterations: c.fit.iterations,
                intercept: c.fit.intercept,
                coefficients: c.coefficients.clone(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupRecord {
    pub id: usize,
    pub name: String,
    pub size: usize,
    pub center: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupingRecord {
    pub source: GroupingSource,
    pub groups: Vec<GroupRecord>,
    pub noise_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mst: Option<MstEdges>,
}

impl GroupingRecord {
    pub fn new(g: &GroupingResult, mst: Option<&MstEdges>) -> Self {
        Self {
            source: g.source,
            groups: g
                .groups
                .iter()
                .map(|gr| GroupRecord {
                    id: gr.id,
                    name: gr.name.clone(),
                    size: gr.members.len(),
                    center: [gr.center.0, gr.center.1],
                })
                .collect(),
            noise_count: g.noise_count(),
            mst: mst.cloned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetRecord {
    pub n: usize,
    pub d: usize,
    pub features: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClockReport {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub dataset: DatasetRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grouping: Option<GroupingRecord>,
    pub clocks: Vec<ClockRecord>,
    pub warnings: Vec<String>,
}

impl ClockReport {
    pub fn new(command: &str, config: &RunConfig, dataset: &Dataset) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL_NAME,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config: config.clone(),
            dataset: DatasetRecord {
                n: dataset.n(),
                d: dataset.d(),
                features: dataset.feature_names().to_vec(),
            },
            grouping: None,
            clocks: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// Canonical JSON value: sorted keys, 12-significant-digit floats.
    pub fn to_value(&self) -> Value {
        canonicalize(serde_json::to_value(self).expect("report is serializable"))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("value is serializable");
        s.push('\n');
        s
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let r: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let f = n.as_f64().expect("f64 number");
            serde_json::Number::from_f64(round_sig12(f)).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        // serde_json's default map is ordered by key
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}
