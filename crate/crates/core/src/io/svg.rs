//! Static SVG figures: placement snapshots and per-UAV routes.
//!
//! Output is plain SVG 1.1 built by string formatting with fixed numeric
//! precision, so identical inputs render identical bytes.

use crate::placement::{StepSnapshot, Trace, Turbine};
use crate::routing::{LegCostMatrix, RoutePlan};
use std::fmt::Write as _;

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 360.0;
const MARGIN: f64 = 30.0;

/// Stroke palette cycled across routes.
const ROUTE_COLORS: [&str; 6] = ["#1f6fb4", "#c23b22", "#2c8a4b", "#8456b8", "#d68118", "#4c7085"];

struct Frame {
    min_x: f64,
    min_y: f64,
    scale: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = (f64, f64)>) -> Frame {
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for (x, y) in points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
        let span_x = (max_x - min_x).max(1.0);
        let span_y = (max_y - min_y).max(1.0);
        let scale =
            ((PANEL_W - 2.0 * MARGIN) / span_x).min((PANEL_H - 2.0 * MARGIN) / span_y);
        Frame { min_x, min_y, scale }
    }

    /// Map to panel coordinates; SVG y grows downward so north stays up.
    fn map(&self, x: f64, y: f64, panel_x: f64) -> (f64, f64) {
        (
            panel_x + MARGIN + (x - self.min_x) * self.scale,
            PANEL_H - MARGIN - (y - self.min_y) * self.scale,
        )
    }
}

fn render_panel(
    svg: &mut String,
    snapshot: &StepSnapshot,
    turbines: &[Turbine],
    frame: &Frame,
    panel_x: f64,
    label: &str,
) {
    let _ = write!(
        svg,
        r##"<rect x="{panel_x:.2}" y="0" width="{PANEL_W:.2}" height="{PANEL_H:.2}" fill="#fbfbf8" stroke="#999999"/>"##
    );
    let _ = write!(
        svg,
        r##"<text x="{:.2}" y="18" font-family="sans-serif" font-size="13" fill="#333333">{label}</text>"##,
        panel_x + 10.0
    );

    let n = snapshot.active.len();
    // Links first so markers draw over them.
    for i in 0..n {
        for j in (i + 1)..n {
            if snapshot.active[i] && snapshot.active[j] && snapshot.links[i][j] {
                let (x1, y1) = frame.map(turbines[i].position.x, turbines[i].position.y, panel_x);
                let (x2, y2) = frame.map(turbines[j].position.x, turbines[j].position.y, panel_x);
                let _ = write!(
                    svg,
                    r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#cccccc" stroke-width="0.6"/>"##
                );
            }
        }
    }
    // Assignment edges.
    for i in 0..n {
        if !snapshot.active[i] {
            continue;
        }
        for (k, assigned) in snapshot.assign[i].iter().enumerate() {
            if !assigned || k == i {
                continue;
            }
            let (x1, y1) = frame.map(turbines[i].position.x, turbines[i].position.y, panel_x);
            let (x2, y2) = frame.map(turbines[k].position.x, turbines[k].position.y, panel_x);
            let _ = write!(
                svg,
                r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#1f6fb4" stroke-width="1.2"/>"##
            );
        }
    }
    // Turbines, then UAV markers on top.
    for t in turbines {
        let (cx, cy) = frame.map(t.position.x, t.position.y, panel_x);
        let _ = write!(
            svg,
            r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="3" fill="#ffffff" stroke="#555555" stroke-width="1"/>"##
        );
    }
    for i in 0..n {
        if snapshot.active[i] {
            let (cx, cy) = frame.map(turbines[i].position.x, turbines[i].position.y, panel_x);
            let _ = write!(
                svg,
                r##"<rect x="{:.2}" y="{:.2}" width="7" height="7" fill="#c23b22" stroke="#5e1c10" stroke-width="0.8"/>"##,
                cx - 3.5,
                cy - 3.5
            );
        }
    }
}

/// Renders up to four reduction snapshots (first, two intermediates, final)
/// side by side.
pub fn placement_steps_svg(trace: &Trace, turbines: &[Turbine]) -> String {
    assert!(!trace.is_empty() && !turbines.is_empty(), "nothing to draw");
    let frame = Frame::fit(turbines.iter().map(|t| (t.position.x, t.position.y)));

    let picks: Vec<usize> = if trace.len() <= 4 {
        (0..trace.len()).collect()
    } else {
        vec![0, trace.len() / 3, 2 * trace.len() / 3, trace.len() - 1]
    };

    let width = PANEL_W * picks.len() as f64;
    let mut svg = format!(
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{PANEL_H:.0}" viewBox="0 0 {width:.2} {PANEL_H:.2}">"##
    );
    for (slot, &idx) in picks.iter().enumerate() {
        let snapshot = &trace[idx];
        let active = snapshot.active.iter().filter(|&&a| a).count();
        let label = format!("step {} — {} UAVs", snapshot.step, active);
        render_panel(&mut svg, snapshot, turbines, &frame, PANEL_W * slot as f64, &label);
    }
    svg.push_str("</svg>\n");
    svg
}

/// Renders one UAV's routes as arrowed polylines, one stroke color per
/// route.
pub fn route_svg(plan: &RoutePlan, costs: &LegCostMatrix) -> String {
    assert!(!plan.routes.is_empty(), "nothing to draw");
    let frame = Frame::fit(costs.nodes.iter().map(|n| (n.position.x, n.position.y)));

    let mut svg = format!(
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{PANEL_W:.0}" height="{PANEL_H:.0}" viewBox="0 0 {PANEL_W:.2} {PANEL_H:.2}">"##
    );
    svg.push_str(
        r##"<defs><marker id="arrow" viewBox="0 0 8 8" refX="7" refY="4" markerWidth="6" markerHeight="6" orient="auto"><path d="M 0 0 L 8 4 L 0 8 z" fill="#333333"/></marker></defs>"##,
    );
    let _ = write!(
        svg,
        r##"<rect x="0" y="0" width="{PANEL_W:.2}" height="{PANEL_H:.2}" fill="#fbfbf8" stroke="#999999"/>"##
    );

    for (r, route) in plan.routes.iter().enumerate() {
        let color = ROUTE_COLORS[r % ROUTE_COLORS.len()];
        let _ = write!(svg, r##"<g stroke="{color}" fill="none" stroke-width="1.5">"## );
        for w in route.nodes.windows(2) {
            let a = &costs.nodes[w[0]];
            let b = &costs.nodes[w[1]];
            let (x1, y1) = frame.map(a.position.x, a.position.y, 0.0);
            let (x2, y2) = frame.map(b.position.x, b.position.y, 0.0);
            let _ = write!(
                svg,
                r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" marker-end="url(#arrow)"/>"##
            );
        }
        svg.push_str("</g>");
    }

    for (i, node) in costs.nodes.iter().enumerate() {
        let (cx, cy) = frame.map(node.position.x, node.position.y, 0.0);
        if i == 0 {
            let _ = write!(
                svg,
                r##"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="#c23b22" stroke="#5e1c10"/>"##,
                cx - 4.0,
                cy - 4.0
            );
        } else {
            let _ = write!(
                svg,
                r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="3.5" fill="#ffffff" stroke="#555555"/>"##
            );
        }
        let _ = write!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" fill="#333333">{}</text>"##,
            cx + 5.0,
            cy - 5.0,
            node.code
        );
    }
    svg.push_str("</svg>\n");
    svg
}
