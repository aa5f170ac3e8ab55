//! Constructive layouts for a fixed circular order.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{wiring_geometry, Point};
use crate::model::{
    validate_bundling, BundledCrossing, BundlingPlan, CircularInstance, CombinatorialDrawing,
    CrossingId, MatchingInstance,
};
use crate::model::to_matching;
use crate::simplify::{reinsert, reinsert_drawing, simplify, Simplification};

/// Which construction produced a layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    TwoSlope,
    Outerplanar,
    /// The outerplanar construction was rejected and the two-slope layout used instead.
    Fallback,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::TwoSlope => "two_slope",
            Algorithm::Outerplanar => "outerplanar",
            Algorithm::Fallback => "fallback",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct LayoutResult {
    pub drawing: CombinatorialDrawing,
    pub plan: BundlingPlan,
    pub bundle_count: usize,
    pub algorithm: Algorithm,
}

impl LayoutResult {
    fn new(drawing: CombinatorialDrawing, plan: BundlingPlan, algorithm: Algorithm) -> Self {
        let bundle_count = plan.len();
        Self {
            drawing,
            plan,
            bundle_count,
            algorithm,
        }
    }
}

/// Every edge leaves its left endpoint with slope one and drops vertically
/// onto its right endpoint; each vertical carries one bundle.
///
/// Uses at most `m - 1` bundles.
pub fn two_slope_layout(m: &MatchingInstance) -> LayoutResult {
    let count = m.m();
    let spans: Vec<(usize, usize)> = (0..count).map(|e| m.span(e)).collect();
    let mut along = Vec::with_capacity(count);
    let mut geometry = Vec::with_capacity(count);
    let mut bundles = Vec::new();
    for e in 0..count {
        let (s, t) = spans[e];
        // crossings on the slant: verticals of edges that started earlier
        let mut slant: Vec<usize> = (0..count)
            .filter(|&f| spans[f].0 < s && s < spans[f].1 && spans[f].1 < t)
            .collect();
        slant.sort_by_key(|&f| spans[f].1);
        // crossings on the vertical, met from the top down
        let mut vertical: Vec<usize> = (0..count)
            .filter(|&f| s < spans[f].0 && spans[f].0 < t && t < spans[f].1)
            .collect();
        vertical.sort_by_key(|&f| spans[f].0);
        along.push(
            slant
                .iter()
                .chain(vertical.iter())
                .map(|&f| CrossingId::new(e, f))
                .collect::<Vec<_>>(),
        );
        let (si, ti) = (s as i64, t as i64);
        geometry.push(vec![Point::int(si, 0), Point::int(ti, ti - si), Point::int(ti, 0)]);
        if !vertical.is_empty() {
            bundles.push(BundledCrossing::grid(
                BTreeSet::from([e]),
                vertical.into_iter().collect(),
            ));
        }
    }
    let drawing = CombinatorialDrawing::new(m.clone(), along, Some(geometry))
        .expect("two-slope drawing is simple and realizable");
    LayoutResult::new(drawing, BundlingPlan::new(bundles), Algorithm::TwoSlope)
}

/// Greedy maximal set of pairwise non-interleaving edges, scanning by index.
///
/// Edges sharing an endpoint count as compatible.
pub fn greedy_outerplanar_subset(inst: &CircularInstance) -> BTreeSet<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for e in 0..inst.m() {
        let compatible = kept.iter().all(|&f| !edges_interleave(inst, e, f));
        if compatible {
            kept.push(e);
        }
    }
    kept.into_iter().collect()
}

fn edges_interleave(inst: &CircularInstance, e: usize, f: usize) -> bool {
    crate::model::interleaves(inst.edge(e), inst.edge(f), inst).unwrap_or(false)
}

/// Layout in which the edges of `estar` are never crossed on a vertical, so
/// only the other edges own bundles: at most two each, at entry and exit.
///
/// Falls back to the two-slope layout if the construction does not certify.
pub fn outerplanar_layout(m: &MatchingInstance, estar: &BTreeSet<usize>) -> Result<LayoutResult> {
    if let Some(&e) = estar.iter().find(|&&e| e >= m.m()) {
        return Err(Error::UnknownId {
            kind: "edge",
            id: e.to_string(),
        });
    }
    for &a in estar {
        for &b in estar.range(a + 1..) {
            if m.crosses(a, b) {
                return Err(Error::NotOuterplanar(a, b));
            }
        }
    }
    let bound = 2 * (m.m() - estar.len());
    match sweep_outerplanar(m, estar) {
        Some(result) if result.bundle_count <= bound => Ok(result),
        _ => {
            let mut fallback = two_slope_layout(m);
            fallback.algorithm = Algorithm::Fallback;
            Ok(fallback)
        }
    }
}

fn sweep_outerplanar(m: &MatchingInstance, estar: &BTreeSet<usize>) -> Option<LayoutResult> {
    let count = m.m();
    let at = m.edge_at_position();
    let mut stack: Vec<usize> = Vec::new();
    let mut along: Vec<Vec<CrossingId>> = vec![Vec::new(); count];
    let mut entry: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); count];
    let mut exit: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); count];

    for (p, slot) in at.iter().enumerate() {
        let Some(e) = *slot else { continue };
        let (s, t) = m.span(e);
        if s == p {
            let height = if estar.contains(&e) {
                0
            } else {
                // rise just above the highest arc of estar this edge must cross
                stack
                    .iter()
                    .rposition(|&f| estar.contains(&f) && m.span(f).1 < t)
                    .map_or(0, |i| i + 1)
            };
            for &f in &stack[..height] {
                along[e].push(CrossingId::new(e, f));
                along[f].push(CrossingId::new(e, f));
                entry[e].insert(f);
            }
            stack.insert(height, e);
        } else {
            let idx = stack.iter().position(|&f| f == e)?;
            if estar.contains(&e) && idx > 0 {
                return None;
            }
            for &f in stack[..idx].iter().rev() {
                along[e].push(CrossingId::new(e, f));
                along[f].push(CrossingId::new(e, f));
                exit[e].insert(f);
            }
            stack.remove(idx);
        }
    }

    let drawing = CombinatorialDrawing::new(m.clone(), along, None).ok()?;
    let geometry = wiring_geometry(&drawing).ok()?;
    let drawing = drawing.with_geometry(Some(geometry)).ok()?;
    let mut bundles = Vec::new();
    for e in 0..count {
        for side in [&entry[e], &exit[e]] {
            if !side.is_empty() {
                bundles.push(BundledCrossing::grid(BTreeSet::from([e]), side.clone()));
            }
        }
    }
    let plan = BundlingPlan::new(bundles);
    if !validate_bundling(&drawing, &plan).ok()?.is_ok() {
        return None;
    }
    Some(LayoutResult::new(drawing, plan, Algorithm::Outerplanar))
}

/// How [`layout_instance`] builds its drawing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    TwoSlope,
    /// Outerplanar layout with the greedy non-interleaving subset.
    GreedyOuterplanar,
}

/// A full layout of an arbitrary instance.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub matching: MatchingInstance,
    pub simplification: Simplification,
    /// Layout of the simplified instance.
    pub core: LayoutResult,
    /// Core layout lifted back to `matching`, with wiring geometry.
    pub result: LayoutResult,
}

/// Expands to a matching, simplifies, lays out the simplified instance and
/// reinserts the removed edges.
pub fn layout_instance(inst: &CircularInstance, strategy: Strategy) -> Result<Pipeline> {
    let matching = to_matching(inst);
    let simplification = simplify(&matching);
    let reduced = &simplification.simplified;
    let core = match strategy {
        Strategy::TwoSlope => two_slope_layout(reduced),
        Strategy::GreedyOuterplanar => {
            outerplanar_layout(reduced, &greedy_outerplanar_subset(reduced.base()))?
        }
    };
    let plan = reinsert(&simplification, &core.plan)?;
    let drawing = reinsert_drawing(&simplification, &core.drawing)?;
    let geometry = wiring_geometry(&drawing)?;
    let drawing = drawing.with_geometry(Some(geometry))?;
    let result = LayoutResult::new(drawing, plan, core.algorithm);
    Ok(Pipeline {
        matching,
        simplification,
        core,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::forced_crossing_pairs;

    fn matching(n: usize, edges: &[(usize, usize)]) -> MatchingInstance {
        MatchingInstance::from_matching(
            CircularInstance::with_identity_order(n, edges.to_vec()).unwrap(),
        )
        .unwrap()
    }

    fn assert_valid(r: &LayoutResult) {
        let report = validate_bundling(&r.drawing, &r.plan).unwrap();
        assert!(report.is_ok(), "{:?}", report.violations);
        assert_eq!(r.bundle_count, r.plan.len());
        assert_eq!(r.drawing.crossings(), &forced_crossing_pairs(r.drawing.instance()));
    }

    #[test]
    fn two_slope_three_chords() {
        let r = two_slope_layout(&matching(6, &[(0, 3), (1, 4), (2, 5)]));
        assert_valid(&r);
        assert_eq!(
            r.plan.bundles,
            vec![
                BundledCrossing::grid([0].into(), [1, 2].into()),
                BundledCrossing::grid([1].into(), [2].into()),
            ]
        );
    }

    #[test]
    fn two_slope_without_crossings() {
        let r = two_slope_layout(&matching(4, &[(0, 1), (2, 3)]));
        assert_valid(&r);
        assert_eq!(r.bundle_count, 0);
        assert!(r.drawing.crossings().is_empty());
    }

    #[test]
    fn two_slope_all_pairs_crossing_is_tight() {
        let edges: Vec<_> = (0..5).map(|i| (i, i + 5)).collect();
        let r = two_slope_layout(&matching(10, &edges));
        assert_valid(&r);
        assert_eq!(r.bundle_count, 4);
    }

    #[test]
    fn greedy_subset_examples() {
        let tri = CircularInstance::with_identity_order(6, vec![(0, 3), (1, 4), (2, 5)]).unwrap();
        assert_eq!(greedy_outerplanar_subset(&tri).len(), 1);
        let flat = CircularInstance::with_identity_order(6, vec![(0, 1), (2, 5), (3, 4)]).unwrap();
        assert_eq!(greedy_outerplanar_subset(&flat), BTreeSet::from([0, 1, 2]));
        let mixed =
            CircularInstance::with_identity_order(8, vec![(0, 3), (1, 2), (4, 7), (2, 5)]).unwrap();
        assert_eq!(greedy_outerplanar_subset(&mixed), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn outerplanar_all_edges_in_estar() {
        let m = matching(6, &[(0, 1), (2, 5), (3, 4)]);
        let r = outerplanar_layout(&m, &BTreeSet::from([0, 1, 2])).unwrap();
        assert_valid(&r);
        assert_eq!(r.bundle_count, 0);
        assert_eq!(r.algorithm, Algorithm::Outerplanar);
    }

    #[test]
    fn outerplanar_entry_and_exit_bundles() {
        let m = matching(8, &[(0, 3), (4, 7), (2, 5)]);
        let r = outerplanar_layout(&m, &BTreeSet::from([0, 1])).unwrap();
        assert_valid(&r);
        assert_eq!(r.algorithm, Algorithm::Outerplanar);
        assert_eq!(
            r.plan.bundles,
            vec![BundledCrossing::single(2, 0), BundledCrossing::single(2, 1)]
        );
    }

    #[test]
    fn outerplanar_empty_estar() {
        let edges: Vec<_> = (0..4).map(|i| (i, i + 4)).collect();
        let m = matching(8, &edges);
        let r = outerplanar_layout(&m, &BTreeSet::new()).unwrap();
        assert_valid(&r);
        assert!(r.bundle_count <= 2 * 4);
        assert!(r.bundle_count <= 3);
    }

    #[test]
    fn outerplanar_rejects_interleaving_estar() {
        let m = matching(4, &[(0, 2), (1, 3)]);
        assert!(matches!(
            outerplanar_layout(&m, &BTreeSet::from([0, 1])),
            Err(Error::NotOuterplanar(0, 1))
        ));
    }
}
