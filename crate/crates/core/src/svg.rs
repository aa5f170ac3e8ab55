//! SVG output for drawings with geometry.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::{crossing_points, Point};
use crate::model::{BundlingPlan, CombinatorialDrawing};

/// Units per vertex slot.
pub const SCALE: f64 = 40.0;
const PAD: f64 = 6.0;
const PALETTE: [&str; 6] = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Vertices on a baseline, edges above it, as constructed.
    Rectangle,
    /// The baseline wrapped around a circle, drawing inside.
    Disk,
}

fn to_f64(r: num_rational::Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

struct Frame {
    mode: Mode,
    n: f64,
    top: f64,
}

impl Frame {
    fn size(&self) -> (f64, f64) {
        match self.mode {
            Mode::Rectangle => (SCALE * (self.n + 1.0), SCALE * (self.top + 2.0)),
            Mode::Disk => {
                let side = 2.0 * self.radius() + 2.0 * SCALE;
                (side, side)
            }
        }
    }

    fn radius(&self) -> f64 {
        SCALE * self.n.max(3.0) / 2.0
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        match self.mode {
            Mode::Rectangle => (SCALE * (x + 1.0), SCALE * (self.top + 1.0 - y)),
            Mode::Disk => {
                let r = self.radius();
                let angle = 2.0 * PI * x / self.n.max(1.0);
                let rho = r * (1.0 - y / (self.top + 1.0));
                (r + SCALE + rho * angle.cos(), r + SCALE - rho * angle.sin())
            }
        }
    }

    /// Mapped polyline; disk mode subdivides segments so they bend with the circle.
    fn path(&self, points: &[Point]) -> Vec<(f64, f64)> {
        let raw: Vec<(f64, f64)> = points.iter().map(|p| (to_f64(p.x), to_f64(p.y))).collect();
        let mut out = Vec::new();
        for (i, &(x, y)) in raw.iter().enumerate() {
            if self.mode == Mode::Disk && i > 0 {
                let (px, py) = raw[i - 1];
                for s in 1..8 {
                    let t = s as f64 / 8.0;
                    out.push(self.map(px + t * (x - px), py + t * (y - py)));
                }
            }
            out.push(self.map(x, y));
        }
        out
    }
}

fn hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn points_attr(pts: &[(f64, f64)]) -> String {
    pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ")
}

/// Renders edges, vertices and one shaded hull per bundle.
pub fn render_svg(d: &CombinatorialDrawing, plan: &BundlingPlan, mode: Mode) -> Result<String> {
    let geometry = d.geometry().ok_or(Error::MissingGeometry)?;
    let points = crossing_points(d)?;
    let top = geometry
        .iter()
        .flatten()
        .map(|p| to_f64(p.y))
        .fold(0.0, f64::max);
    let frame = Frame {
        mode,
        n: d.instance().n() as f64,
        top,
    };
    let (w, h) = frame.size();
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    )
    .unwrap();
    writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();
    if mode == Mode::Disk {
        let r = frame.radius();
        let c = r + SCALE;
        writeln!(out, r##"<circle cx="{c:.2}" cy="{c:.2}" r="{r:.2}" fill="none" stroke="#cccccc"/>"##).unwrap();
    }
    for (i, b) in plan.bundles.iter().enumerate() {
        let mut corners = Vec::new();
        for c in &b.member_crossings {
            let Some(p) = points.get(c) else { continue };
            let (x, y) = frame.map(to_f64(p.x), to_f64(p.y));
            for (dx, dy) in [(-PAD, -PAD), (PAD, -PAD), (PAD, PAD), (-PAD, PAD)] {
                corners.push((x + dx, y + dy));
            }
        }
        let color = PALETTE[i % PALETTE.len()];
        writeln!(
            out,
            r#"<polygon class="bundle" points="{}" fill="{color}" fill-opacity="0.3" stroke="{color}"/>"#,
            points_attr(&hull(corners))
        )
        .unwrap();
    }
    for line in geometry {
        writeln!(
            out,
            r##"<polyline class="edge" points="{}" fill="none" stroke="#222222" stroke-width="1.5"/>"##,
            points_attr(&frame.path(line))
        )
        .unwrap();
    }
    for p in 0..d.instance().n() {
        let (x, y) = frame.map(p as f64, 0.0);
        writeln!(out, r##"<circle class="vertex" cx="{x:.2}" cy="{y:.2}" r="4" fill="#000000"/>"##).unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::two_slope_layout;
    use crate::model::{CircularInstance, MatchingInstance};

    fn layout(n: usize, edges: &[(usize, usize)]) -> crate::layout::LayoutResult {
        let inst = CircularInstance::with_identity_order(n, edges.to_vec()).unwrap();
        two_slope_layout(&MatchingInstance::from_matching(inst).unwrap())
    }

    #[test]
    fn empty_instance_has_only_vertices() {
        let l = layout(3, &[]);
        let svg = render_svg(&l.drawing, &l.plan, Mode::Rectangle).unwrap();
        assert_eq!(svg.matches("class=\"vertex\"").count(), 3);
        assert!(!svg.contains("class=\"edge\""));
        assert!(!svg.contains("class=\"bundle\""));
    }

    #[test]
    fn one_region_per_bundle() {
        let l = layout(4, &[(0, 2), (1, 3)]);
        for mode in [Mode::Rectangle, Mode::Disk] {
            let svg = render_svg(&l.drawing, &l.plan, mode).unwrap();
            assert_eq!(svg.matches("class=\"bundle\"").count(), 1);
        }
        let l = layout(6, &[(0, 3), (1, 4), (2, 5)]);
        let svg = render_svg(&l.drawing, &l.plan, Mode::Disk).unwrap();
        assert_eq!(svg.matches("class=\"bundle\"").count(), 2);
    }

    #[test]
    fn needs_geometry() {
        let l = layout(4, &[(0, 2), (1, 3)]);
        let bare = l.drawing.clone().with_geometry(None).unwrap();
        assert_eq!(render_svg(&bare, &l.plan, Mode::Rectangle), Err(Error::MissingGeometry));
    }

    #[test]
    fn deterministic() {
        let l = layout(6, &[(0, 3), (1, 4), (2, 5)]);
        let a = render_svg(&l.drawing, &l.plan, Mode::Rectangle).unwrap();
        let b = render_svg(&l.drawing, &l.plan, Mode::Rectangle).unwrap();
        assert_eq!(a, b);
    }
}
