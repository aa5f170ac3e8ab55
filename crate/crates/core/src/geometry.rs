//! Exact planar geometry for drawings in the half-plane above the baseline.
//!
//! Vertex at circular position `p` sits at `(p, 0)`; edges live in `y > 0`.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::{CombinatorialDrawing, CrossingId};

pub type Coord = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        Self { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Self::new(Coord::from_integer(x), Coord::from_integer(y))
    }
}

pub type Polyline = Vec<Point>;

fn cross(ax: Coord, ay: Coord, bx: Coord, by: Coord) -> Coord {
    ax * by - ay * bx
}

/// Intersection point of two closed segments, if they meet in exactly one point.
pub fn segment_intersection(a0: Point, a1: Point, b0: Point, b1: Point) -> Option<Point> {
    let (rx, ry) = (a1.x - a0.x, a1.y - a0.y);
    let (sx, sy) = (b1.x - b0.x, b1.y - b0.y);
    let denom = cross(rx, ry, sx, sy);
    if denom == Coord::from_integer(0) {
        return None;
    }
    let (qx, qy) = (b0.x - a0.x, b0.y - a0.y);
    let t = cross(qx, qy, sx, sy) / denom;
    let u = cross(qx, qy, rx, ry) / denom;
    let zero = Coord::from_integer(0);
    let one = Coord::from_integer(1);
    if t < zero || t > one || u < zero || u > one {
        return None;
    }
    Some(Point::new(a0.x + t * rx, a0.y + t * ry))
}

/// All points where two polylines meet, deduplicated and sorted.
pub fn polyline_intersections(p: &[Point], q: &[Point]) -> Vec<Point> {
    let mut out = Vec::new();
    for a in p.windows(2) {
        for b in q.windows(2) {
            if let Some(x) = segment_intersection(a[0], a[1], b[0], b[1]) {
                out.push(x);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Location of every crossing of `d` on its geometry.
pub fn crossing_points(d: &CombinatorialDrawing) -> Result<BTreeMap<CrossingId, Point>> {
    let geometry = d.geometry().ok_or(Error::MissingGeometry)?;
    let mut out = BTreeMap::new();
    for &c in d.crossings() {
        let hits = polyline_intersections(&geometry[c.lo()], &geometry[c.hi()]);
        let point = hits.first().copied().ok_or_else(|| {
            Error::InvalidDrawing(format!("polylines of crossing {c} do not meet"))
        })?;
        out.insert(c, point);
    }
    Ok(out)
}

/// Draws any realizable drawing as a wiring diagram: edges run on horizontal
/// tracks, rise at their left endpoint, drop at their right endpoint, and
/// swap adjacent tracks at crossings.
pub fn wiring_geometry(d: &CombinatorialDrawing) -> Result<Vec<Polyline>> {
    let inst = d.instance();
    let n = inst.n();
    let at = inst.edge_at_position();
    let mut lines: Vec<Polyline> = vec![Vec::new(); inst.m()];
    let mut next = vec![0usize; inst.m()];
    let mut stack: Vec<usize> = Vec::new();

    let pending = |e: usize, next: &[usize]| d.sequence(e).get(next[e]).copied();
    let q = |num: i64, den: i64| Coord::new(num, den);

    for p in 0..n {
        let Some(e) = at[p] else { continue };
        let (s, _) = inst.span(e);
        let entering = s == p;
        let x = Coord::from_integer(p as i64);
        if entering {
            stack.insert(0, e);
            lines[e].push(Point::new(x, q(0, 1)));
            lines[e].push(Point::new(x, q(1, 1)));
        } else {
            if stack.first() != Some(&e) || pending(e, &next).is_some() {
                return Err(Error::InvalidDrawing(format!(
                    "edge {e} cannot leave the sweep at position {p}"
                )));
            }
            lines[e].push(Point::new(x, q(1, 1)));
            lines[e].push(Point::new(x, q(0, 1)));
            stack.remove(0);
        }

        // swaps that become ready before the next event
        let mut swaps = Vec::new();
        loop {
            let ready = (0..stack.len().saturating_sub(1)).find(|&i| {
                let (a, b) = (stack[i], stack[i + 1]);
                pending(a, &next) == Some(CrossingId::new(a, b))
                    && pending(b, &next) == Some(CrossingId::new(a, b))
            });
            let Some(i) = ready else { break };
            let (a, b) = (stack[i], stack[i + 1]);
            next[a] += 1;
            next[b] += 1;
            stack.swap(i, i + 1);
            swaps.push(i);
        }
        let next_event_enters = (p + 1..n)
            .find_map(|r| at[r].map(|f| inst.span(f).0 == r))
            .unwrap_or(false);
        let steps = usize::from(!entering) + swaps.len() + usize::from(next_event_enters);
        if steps == 0 {
            continue;
        }
        let width = steps as i64;
        let step_x = |i: usize| x + q(i as i64, width);

        // replay the levels step by step
        let mut levels: Vec<usize> = stack.clone();
        for &i in swaps.iter().rev() {
            levels.swap(i, i + 1);
        }
        let mut step = 0;
        let emit = |before: &[usize], after: &[usize], step: usize, shift: i64, lines: &mut Vec<Polyline>| {
            for (lvl, &f) in after.iter().enumerate() {
                let old = before.iter().position(|&g| g == f);
                let new_level = lvl as i64 + 1 + shift;
                let old_level = old.map_or(new_level, |o| o as i64 + 1);
                if old_level != new_level {
                    lines[f].push(Point::new(step_x(step), q(old_level, 1)));
                    lines[f].push(Point::new(step_x(step + 1), q(new_level, 1)));
                }
            }
        };
        if !entering {
            // tracks above the departed edge move down
            let before: Vec<usize> = std::iter::once(usize::MAX).chain(levels.iter().copied()).collect();
            emit(&before, &levels, step, 0, &mut lines);
            step += 1;
        }
        for &i in &swaps {
            let before = levels.clone();
            levels.swap(i, i + 1);
            emit(&before, &levels, step, 0, &mut lines);
            step += 1;
        }
        if next_event_enters {
            emit(&levels.clone(), &levels, step, 1, &mut lines);
        }
    }
    for line in &mut lines {
        line.dedup();
    }
    Ok(lines)
}
