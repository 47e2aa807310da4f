//! Deterministic SVG output.
//!
//! A [`Scene`] holds drawing elements already mapped to pixel space. Every
//! coordinate is written with two decimals so identical inputs always
//! serialize to identical bytes.

mod glyphs;

pub use glyphs::{circle_vertices, render_circles, render_clock, render_intergroup, render_scatter};

use std::fmt::Write as _;

/// Fixed categorical palette (matplotlib "tab10").
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Marker color for noise points.
pub const NOISE_COLOR: &str = "#b8b8b8";

/// Dash patterns used once the palette wraps around.
const DASHES: [&str; 4] = ["", "6 3", "2 2", "8 3 2 3"];

/// Color and dash pattern for the `i`-th feature or group.
pub fn style_for(i: usize) -> (&'static str, &'static str) {
    (PALETTE[i % PALETTE.len()], DASHES[(i / PALETTE.len()) % DASHES.len()])
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    pub width: u32,
    pub height: u32,
    /// Multiplier applied to every clock radius.
    pub clock_scale: f64,
    pub margin: f64,
    /// Width reserved on the right for the legend.
    pub legend_width: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self {
            width: 900,
            height: 600,
            clock_scale: 1.0,
            margin: 30.0,
            legend_width: 180.0,
        }
    }
}

/// Axis-aligned data-space bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: (f64, f64),
    pub max: (f64, f64),
}

impl Bounds {
    pub fn from_points<I: IntoIterator<Item = (f64, f64)>>(points: I) -> Self {
        let mut b = Bounds {
            min: (f64::INFINITY, f64::INFINITY),
            max: (f64::NEG_INFINITY, f64::NEG_INFINITY),
        };
        for p in points {
            b.include(p);
        }
        b
    }

    pub fn include(&mut self, p: (f64, f64)) {
        self.min = (self.min.0.min(p.0), self.min.1.min(p.1));
        self.max = (self.max.0.max(p.0), self.max.1.max(p.1));
    }

    pub fn include_circle(&mut self, center: (f64, f64), radius: f64) {
        self.include((center.0 - radius, center.1 - radius));
        self.include((center.0 + radius, center.1 + radius));
    }

    fn is_valid(&self) -> bool {
        self.min.0.is_finite() && self.max.0.is_finite() && self.min.1.is_finite() && self.max.1.is_finite()
    }
}

/// Uniform-scale affine map from data space to pixels (y axis flipped).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub scale: f64,
    pub origin: (f64, f64),
}

impl Viewport {
    pub fn fit(bounds: &Bounds, config: &RenderConfig) -> Self {
        let b = if bounds.is_valid() {
            *bounds
        } else {
            Bounds {
                min: (-1.0, -1.0),
                max: (1.0, 1.0),
            }
        };
        let plot_w = (config.width as f64 - 2.0 * config.margin - config.legend_width).max(10.0);
        let plot_h = (config.height as f64 - 2.0 * config.margin).max(10.0);
        let span = |lo: f64, hi: f64| if hi - lo > 0.0 { hi - lo } else { 1.0 };
        let (w, h) = (span(b.min.0, b.max.0), span(b.min.1, b.max.1));
        let scale = (plot_w / w).min(plot_h / h);
        let cx = 0.5 * (b.min.0 + b.max.0);
        let cy = 0.5 * (b.min.1 + b.max.1);
        let px_cx = config.margin + 0.5 * plot_w;
        let px_cy = config.margin + 0.5 * plot_h;
        Self {
            scale,
            origin: (px_cx - scale * cx, px_cy + scale * cy),
        }
    }

    pub fn to_px(&self, p: (f64, f64)) -> (f64, f64) {
        (self.origin.0 + self.scale * p.0, self.origin.1 - self.scale * p.1)
    }

    pub fn to_data(&self, px: (f64, f64)) -> (f64, f64) {
        ((px.0 - self.origin.0) / self.scale, (self.origin.1 - px.1) / self.scale)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Circle {
        center: (f64, f64),
        radius: f64,
        fill: String,
        stroke: Option<String>,
        class: &'static str,
    },
    Line {
        from: (f64, f64),
        to: (f64, f64),
        stroke: String,
        width: f64,
        dash: &'static str,
        class: &'static str,
    },
    Polygon {
        points: Vec<(f64, f64)>,
        fill: String,
        class: &'static str,
    },
    Polyline {
        points: Vec<(f64, f64)>,
        stroke: String,
        dash: &'static str,
        class: &'static str,
        feature: String,
    },
    Text {
        at: (f64, f64),
        text: String,
        size: f64,
        anchor: &'static str,
        class: &'static str,
        feature: Option<String>,
    },
}

/// One drawn arrow, kept for consistency checks against the clock data.
#[derive(Debug, Clone, PartialEq)]
pub struct DrawnArrow {
    pub feature: String,
    pub magnitude: f64,
    pub length_px: f64,
    pub radius_px: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendEntry {
    pub name: String,
    pub color: &'static str,
    pub dash: &'static str,
    /// Marker (point group) entry rather than a feature line.
    pub marker: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub width: u32,
    pub height: u32,
    pub viewport: Viewport,
    pub config: RenderConfig,
    pub title: Option<String>,
    pub points: Vec<Element>,
    pub glyphs: Vec<Element>,
    pub annotations: Vec<Element>,
    pub legend: Vec<LegendEntry>,
    pub arrows: Vec<DrawnArrow>,
    placed_labels: Vec<(f64, f64)>,
}

impl Scene {
    pub fn new(config: &RenderConfig, bounds: &Bounds) -> Self {
        Self {
            width: config.width,
            height: config.height,
            viewport: Viewport::fit(bounds, config),
            config: config.clone(),
            title: None,
            points: Vec::new(),
            glyphs: Vec::new(),
            annotations: Vec::new(),
            legend: Vec::new(),
            arrows: Vec::new(),
            placed_labels: Vec::new(),
        }
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub(crate) fn add_legend(&mut self, name: &str, color: &'static str, dash: &'static str, marker: bool) {
        if !self.legend.iter().any(|e| e.name == name && e.marker == marker) {
            self.legend.push(LegendEntry {
                name: name.to_string(),
                color,
                dash,
                marker,
            });
        }
    }

    /// Serializes the scene as a standalone SVG document.
    pub fn to_svg(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="Helvetica, Arial, sans-serif">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(s, r#"<rect width="{}" height="{}" fill="white"/>"#, self.width, self.height);
        if let Some(title) = &self.title {
            let _ = writeln!(
                s,
                r#"<text class="title" x="{}" y="18" font-size="14" text-anchor="middle">{}</text>"#,
                fmt2(self.width as f64 * 0.5),
                escape(title)
            );
        }
        for (id, layer) in [
            ("points", &self.points),
            ("clocks", &self.glyphs),
            ("annotations", &self.annotations),
        ] {
            let _ = writeln!(s, r#"<g id="{id}">"#);
            for e in layer {
                write_element(&mut s, e);
            }
            let _ = writeln!(s, "</g>");
        }
        self.write_legend(&mut s);
        s.push_str("</svg>\n");
        s
    }

    fn write_legend(&self, s: &mut String) {
        let _ = writeln!(s, r#"<g id="legend">"#);
        let x0 = self.width as f64 - self.config.legend_width + 10.0;
        let mut y = self.config.margin + 10.0;
        for entry in &self.legend {
            if entry.marker {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{}" cy="{}" r="4" fill="{}"/>"#,
                    fmt2(x0 + 10.0),
                    fmt2(y),
                    entry.color
                );
            } else {
                let _ = writeln!(
                    s,
                    r#"<line x1="{}" y1="{y1}" x2="{}" y2="{y1}" stroke="{}" stroke-width="2.5"{}/>"#,
                    fmt2(x0),
                    fmt2(x0 + 20.0),
                    entry.color,
                    dash_attr(entry.dash),
                    y1 = fmt2(y)
                );
            }
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="12">{}</text>"#,
                fmt2(x0 + 28.0),
                fmt2(y + 4.0),
                escape(&entry.name)
            );
            y += 18.0;
        }
        let _ = writeln!(s, "</g>");
    }
}

/// Two-decimal formatting without negative zero.
pub fn fmt2(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r:.2}")
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn dash_attr(dash: &str) -> String {
    if dash.is_empty() {
        String::new()
    } else {
        format!(r#" stroke-dasharray="{dash}""#)
    }
}

fn points_attr(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|p| format!("{},{}", fmt2(p.0), fmt2(p.1)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_element(s: &mut String, e: &Element) {
    let _ = match e {
        Element::Circle {
            center,
            radius,
            fill,
            stroke,
            class,
        } => {
            let stroke = stroke
                .as_ref()
                .map(|c| format!(r#" stroke="{c}" stroke-width="1.2""#))
                .unwrap_or_default();
            writeln!(
                s,
                r#"<circle class="{class}" cx="{}" cy="{}" r="{}" fill="{fill}"{stroke}/>"#,
                fmt2(center.0),
                fmt2(center.1),
                fmt2(*radius)
            )
        }
        Element::Line {
            from,
            to,
            stroke,
            width,
            dash,
            class,
        } => writeln!(
            s,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{}"{}/>"#,
            fmt2(from.0),
            fmt2(from.1),
            fmt2(to.0),
            fmt2(to.1),
            fmt2(*width),
            dash_attr(dash)
        ),
        Element::Polygon { points, fill, class } => writeln!(
            s,
            r#"<polygon class="{class}" points="{}" fill="{fill}"/>"#,
            points_attr(points)
        ),
        Element::Polyline {
            points,
            stroke,
            dash,
            class,
            feature,
        } => writeln!(
            s,
            r#"<polyline class="{class}" data-feature="{}" points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"{}/>"#,
            escape(feature),
            points_attr(points),
            dash_attr(dash)
        ),
        Element::Text {
            at,
            text,
            size,
            anchor,
            class,
            feature,
        } => {
            let feature = feature
                .as_ref()
                .map(|f| format!(r#" data-feature="{}""#, escape(f)))
                .unwrap_or_default();
            writeln!(
                s,
                r#"<text class="{class}"{feature} x="{}" y="{}" font-size="{}" text-anchor="{anchor}">{}</text>"#,
                fmt2(at.0),
                fmt2(at.1),
                fmt2(*size),
                escape(text)
            )
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt2_rounding() {
        assert_eq!(fmt2(1.005_000_1), "1.01");
        assert_eq!(fmt2(-0.001), "0.00");
        assert_eq!(fmt2(12.0), "12.00");
    }

    #[test]
    fn viewport_roundtrip_and_flip() {
        let b = Bounds::from_points([(-2.0, -1.0), (4.0, 3.0)]);
        let v = Viewport::fit(&b, &RenderConfig::default());
        let p = (1.5, -0.25);
        let back = v.to_data(v.to_px(p));
        assert!((back.0 - p.0).abs() < 1e-12 && (back.1 - p.1).abs() < 1e-12);
        assert!(v.to_px((0.0, 1.0)).1 < v.to_px((0.0, 0.0)).1);
        assert!(v.scale > 0.0);
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn styles_cycle_with_dashes() {
        assert_eq!(style_for(0), (PALETTE[0], ""));
        assert_eq!(style_for(10), (PALETTE[0], "6 3"));
        assert_ne!(style_for(3), style_for(13));
    }
}
