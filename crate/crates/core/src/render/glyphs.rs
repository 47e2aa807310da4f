use super::{fmt2, style_for, DrawnArrow, Element, Scene, NOISE_COLOR, PALETTE};
use crate::clockcore::{unit, Clock, ClockArrow};
use crate::grouping::GroupingResult;
use crate::ingest::Dataset;
use crate::intergroup::IntergroupClock;

const MARKER_RADIUS: f64 = 3.0;
const HEAD_LENGTH: f64 = 8.0;
const HEAD_HALF_WIDTH: f64 = 4.0;
const LABEL_GAP: f64 = 12.0;
const LABEL_MIN_DIST: f64 = 16.0;
const LABEL_NUDGE_DEG: f64 = 12.0;

/// Pixel-space direction for a data-space angle (the y axis is flipped).
fn px_dir(angle_deg: f64) -> (f64, f64) {
    let (c, s) = unit(angle_deg);
    (c, -s)
}

/// One marker per embedded point, colored by group; noise is gray.
pub fn render_scatter(mut scene: Scene, dataset: &Dataset, grouping: Option<&GroupingResult>) -> Scene {
    let y = dataset.y();
    for i in 0..y.rows() {
        let color = match grouping {
            None => PALETTE[0],
            Some(g) => match g.labels[i] {
                Some(id) => style_for(id).0,
                None => NOISE_COLOR,
            },
        };
        let center = scene.viewport.to_px((y.get(i, 0), y.get(i, 1)));
        scene.points.push(Element::Circle {
            center,
            radius: MARKER_RADIUS,
            fill: color.to_string(),
            stroke: None,
            class: "point",
        });
    }
    if let Some(g) = grouping {
        for group in &g.groups {
            scene.add_legend(&group.name, style_for(group.id).0, "", true);
        }
        if g.noise_count() > 0 {
            scene.add_legend("noise", NOISE_COLOR, "", true);
        }
    }
    scene
}

/// Places an annotation on a circle of `radius` around `center` at
/// `angle_deg`, stepping the angle until it clears earlier labels.
fn place_label(scene: &mut Scene, center: (f64, f64), radius: f64, angle_deg: f64) -> (f64, f64) {
    let mut angle = angle_deg;
    let mut pos = (0.0, 0.0);
    for _ in 0..30 {
        let (dx, dy) = px_dir(angle);
        pos = (center.0 + radius * dx, center.1 + radius * dy + 4.0);
        let clear = scene
            .placed_labels
            .iter()
            .all(|p| (p.0 - pos.0).hypot(p.1 - pos.1) >= LABEL_MIN_DIST);
        if clear {
            break;
        }
        angle += LABEL_NUDGE_DEG;
    }
    scene.placed_labels.push(pos);
    pos
}

fn draw_arrow(scene: &mut Scene, origin: (f64, f64), angle_deg: f64, length: f64, arrow: &ClockArrow) {
    let (color, dash) = style_for(arrow.feature_index);
    let (dx, dy) = px_dir(angle_deg);
    let tip = (origin.0 + length * dx, origin.1 + length * dy);
    scene.glyphs.push(Element::Line {
        from: origin,
        to: tip,
        stroke: color.to_string(),
        width: 2.0,
        dash,
        class: "arrow",
    });
    if length > 0.0 {
        let head = HEAD_LENGTH.min(length);
        let base = (tip.0 - head * dx, tip.1 - head * dy);
        let (nx, ny) = (-dy, dx);
        scene.glyphs.push(Element::Polygon {
            points: vec![
                tip,
                (base.0 + HEAD_HALF_WIDTH * nx, base.1 + HEAD_HALF_WIDTH * ny),
                (base.0 - HEAD_HALF_WIDTH * nx, base.1 - HEAD_HALF_WIDTH * ny),
            ],
            fill: color.to_string(),
            class: "arrowhead",
        });
    }
    scene.add_legend(&arrow.feature, color, dash, false);
}

fn annotate(scene: &mut Scene, origin: (f64, f64), radius: f64, arrow: &ClockArrow, length: f64, radius_px: f64) {
    let label = fmt2(arrow.magnitude);
    let at = place_label(scene, origin, radius, arrow.angle_deg);
    scene.annotations.push(Element::Text {
        at,
        text: label.clone(),
        size: 11.0,
        anchor: "middle",
        class: "annotation",
        feature: Some(arrow.feature.clone()),
    });
    scene.arrows.push(DrawnArrow {
        feature: arrow.feature.clone(),
        magnitude: arrow.magnitude,
        length_px: length,
        radius_px,
        label,
    });
}

fn max_magnitude(arrows: &[ClockArrow]) -> f64 {
    arrows.iter().map(|a| a.magnitude).fold(0.0, f64::max)
}

/// Radius of a clock glyph in pixels.
pub(crate) fn clock_radius_px(scene: &Scene, scale: f64) -> f64 {
    scale * scene.config.clock_scale * scene.viewport.scale
}

/// Draws the clock circle, its arrows scaled so the longest reaches the rim,
/// and a magnitude label per arrow just outside the rim.
pub fn render_clock(mut scene: Scene, clock: &Clock) -> Scene {
    let center = scene.viewport.to_px(clock.anchor);
    let radius = clock_radius_px(&scene, clock.scale);
    scene.glyphs.push(Element::Circle {
        center,
        radius,
        fill: "none".into(),
        stroke: Some("#333333".into()),
        class: "clock",
    });
    scene.glyphs.push(Element::Circle {
        center,
        radius: 2.0,
        fill: "#333333".into(),
        stroke: None,
        class: "clock-center",
    });
    scene.annotations.push(Element::Text {
        at: (center.0, center.1 - radius - 4.0),
        text: clock.label.clone(),
        size: 11.0,
        anchor: "middle",
        class: "clock-label",
        feature: None,
    });
    if clock.arrows.is_empty() {
        scene.annotations.push(Element::Text {
            at: (center.0, center.1 + 4.0),
            text: "no significant features".into(),
            size: 11.0,
            anchor: "middle",
            class: "caption",
            feature: None,
        });
        return scene;
    }
    let max = max_magnitude(&clock.arrows);
    for arrow in &clock.arrows {
        let length = if max > 0.0 { arrow.magnitude / max * radius } else { 0.0 };
        draw_arrow(&mut scene, center, arrow.angle_deg, length, arrow);
        annotate(&mut scene, center, radius + LABEL_GAP, arrow, length, radius);
    }
    scene
}

/// Center-to-center segments with signed arrows along each from its midpoint.
pub fn render_intergroup(mut scene: Scene, clocks: &[IntergroupClock]) -> Scene {
    let mut drawn_groups = Vec::new();
    for clock in clocks {
        let a = scene.viewport.to_px(clock.centers.0);
        let b = scene.viewport.to_px(clock.centers.1);
        scene.glyphs.push(Element::Line {
            from: a,
            to: b,
            stroke: "#555555".into(),
            width: 1.5,
            dash: "",
            class: "segment",
        });
        let ends = [(clock.edge.0, a, &clock.group_names.0), (clock.edge.1, b, &clock.group_names.1)];
        for (id, pt, name) in ends {
            if drawn_groups.contains(&id) {
                continue;
            }
            drawn_groups.push(id);
            scene.glyphs.push(Element::Circle {
                center: pt,
                radius: 4.0,
                fill: "#555555".into(),
                stroke: None,
                class: "group-center",
            });
            let at = (pt.0, pt.1 - 8.0);
            scene.placed_labels.push(at);
            scene.annotations.push(Element::Text {
                at,
                text: name.clone(),
                size: 11.0,
                anchor: "middle",
                class: "group-label",
                feature: None,
            });
        }
    }
    for clock in clocks {
        let origin = scene.viewport.to_px(clock.anchor);
        let radius = clock_radius_px(&scene, clock.scale);
        let max = max_magnitude(&clock.arrows);
        for arrow in &clock.arrows {
            let length = if max > 0.0 { arrow.magnitude / max * radius } else { 0.0 };
            draw_arrow(&mut scene, origin, arrow.angle_deg, length, arrow);
            annotate(&mut scene, origin, length + LABEL_GAP, arrow, length, radius);
        }
    }
    scene
}

/// Data-space vertices `(b cos θ, b sin θ)` of a coefficient sweep, closed
/// by repeating the first vertex. Samples over [0°, 180°) already trace the
/// full circle because `b(θ + 180°) = -b(θ)` maps to the same point.
pub fn circle_vertices(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(angle, b)| {
            let (c, s) = unit(angle);
            (b * c, b * s)
        })
        .collect();
    if let Some(&first) = pts.first() {
        pts.push(first);
    }
    pts
}

/// Draws every significant feature's coefficient circle inside the clock.
pub fn render_circles(mut scene: Scene, clock: &Clock) -> Scene {
    let Some(series) = &clock.circles else {
        return scene;
    };
    let max = max_magnitude(&clock.arrows);
    if max <= 0.0 {
        return scene;
    }
    let center = scene.viewport.to_px(clock.anchor);
    let k = clock_radius_px(&scene, clock.scale) / max;
    for s in series {
        if !clock.arrows.iter().any(|a| a.feature_index == s.feature_index) {
            continue;
        }
        let (color, dash) = style_for(s.feature_index);
        let points = circle_vertices(&s.samples)
            .into_iter()
            .map(|(x, y)| (center.0 + k * x, center.1 - k * y))
            .collect();
        scene.glyphs.push(Element::Polyline {
            points,
            stroke: color.to_string(),
            dash,
            class: "coefficient-circle",
            feature: s.feature.clone(),
        });
        scene.add_legend(&s.feature, color, dash, false);
    }
    scene
}
