//! Reduction to simplified instances and reinsertion of removed edges.
//!
//! An instance is simplified when no two edges are parallel (non-interleaving
//! with both endpoint pairs adjacent on the circle) and every edge must cross
//! some other edge.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{
    BundledCrossing, BundlingPlan, CircularInstance, CombinatorialDrawing, CrossingId,
    MatchingInstance,
};

/// One removal step; edge indices refer to the input instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Removal {
    CrossingFree(usize),
    Parallel { removed: usize, kept: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RemovalLog(pub Vec<Removal>);

#[derive(Debug, Clone)]
pub struct Simplification {
    pub original: MatchingInstance,
    /// Surviving edges only, endpoints of removed edges dropped from the circle.
    pub simplified: MatchingInstance,
    /// `kept[i]` is the input index of simplified edge `i`.
    pub kept: Vec<usize>,
    pub log: RemovalLog,
}

/// Removes parallel edges, then uncrossed edges, until neither applies.
///
/// Each round removes the higher-indexed member of the first parallel pair in
/// index order; if there is none, the first uncrossed edge.
pub fn simplify(m: &MatchingInstance) -> Simplification {
    let count = m.m();
    let mut alive = vec![true; count];
    let mut log = Vec::new();
    let by_position = m.edge_at_position();

    loop {
        let residual: Vec<usize> = by_position.iter().flatten().copied().filter(|&e| alive[e]).collect();
        let len = residual.len();
        // residual rank of each surviving endpoint, per edge
        let mut rank = vec![(usize::MAX, usize::MAX); count];
        for (r, &e) in residual.iter().enumerate() {
            if rank[e].0 == usize::MAX {
                rank[e].0 = r;
            } else {
                rank[e].1 = r;
            }
        }
        let adjacent = |i: usize, j: usize| (i + 1) % len == j || (j + 1) % len == i;
        let parallel = (0..count).filter(|&e| alive[e]).find_map(|e| {
            (e + 1..count).filter(|&f| alive[f]).find_map(|f| {
                let (a, b) = rank[e];
                let (c, d) = rank[f];
                let paired = (adjacent(a, c) && adjacent(b, d)) || (adjacent(a, d) && adjacent(b, c));
                (paired && !m.crosses(e, f)).then_some((e, f))
            })
        });
        if let Some((kept, removed)) = parallel {
            alive[removed] = false;
            log.push(Removal::Parallel { removed, kept });
            continue;
        }
        let free = (0..count)
            .filter(|&e| alive[e])
            .find(|&e| !(0..count).any(|f| alive[f] && m.crosses(e, f)));
        if let Some(e) = free {
            alive[e] = false;
            log.push(Removal::CrossingFree(e));
            continue;
        }
        break;
    }

    let kept: Vec<usize> = (0..count).filter(|&e| alive[e]).collect();
    let mut new_index = vec![usize::MAX; count];
    for (i, &e) in kept.iter().enumerate() {
        new_index[e] = i;
    }
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); kept.len()];
    let mut origin_map = Vec::new();
    for (p, slot) in by_position.iter().enumerate() {
        if let Some(e) = slot.filter(|&e| alive[e]) {
            ends[new_index[e]].push(origin_map.len());
            let vertex = m.base().order()[p];
            origin_map.push(m.origin_map()[vertex]);
        }
    }
    let edges = ends.iter().map(|v| (v[0], v[1])).collect();
    let base = CircularInstance::with_identity_order(origin_map.len(), edges)
        .expect("compacted instance is valid");
    let simplified = MatchingInstance::new(base, origin_map).expect("subset of a matching");
    Simplification {
        original: m.clone(),
        simplified,
        kept,
        log: RemovalLog(log),
    }
}

impl Simplification {
    pub fn is_identity(&self) -> bool {
        self.log.0.is_empty()
    }

    fn lift_plan(&self, p: &BundlingPlan) -> Result<Vec<BundledCrossing>> {
        let lift = |e: usize| {
            self.kept
                .get(e)
                .copied()
                .ok_or_else(|| Error::LogMismatch(format!("plan edge {e} is not in the simplified instance")))
        };
        p.bundles
            .iter()
            .map(|b| {
                Ok(BundledCrossing {
                    bundle1: b.bundle1.iter().map(|&e| lift(e)).collect::<Result<_>>()?,
                    bundle2: b.bundle2.iter().map(|&e| lift(e)).collect::<Result<_>>()?,
                    member_crossings: b
                        .member_crossings
                        .iter()
                        .map(|c| Ok(CrossingId::new(lift(c.lo())?, lift(c.hi())?)))
                        .collect::<Result<_>>()?,
                })
            })
            .collect()
    }

    /// Replays the log backwards, checking each kept partner is present.
    fn replay(&self, mut step: impl FnMut(Removal)) -> Result<()> {
        let mut present: BTreeSet<usize> = self.kept.iter().copied().collect();
        for &r in self.log.0.iter().rev() {
            match r {
                Removal::CrossingFree(e) => {
                    if !present.insert(e) {
                        return Err(Error::LogMismatch(format!("edge {e} reinserted twice")));
                    }
                }
                Removal::Parallel { removed, kept } => {
                    if !present.contains(&kept) {
                        return Err(Error::LogMismatch(format!(
                            "partner {kept} of edge {removed} is absent"
                        )));
                    }
                    if !present.insert(removed) {
                        return Err(Error::LogMismatch(format!("edge {removed} reinserted twice")));
                    }
                }
            }
            step(r);
        }
        Ok(())
    }
}

/// Lifts a plan for the simplified instance to the original one: every
/// parallel edge joins its partner's bundles on the same side.
pub fn reinsert(s: &Simplification, p: &BundlingPlan) -> Result<BundlingPlan> {
    let mut bundles = s.lift_plan(p)?;
    s.replay(|r| {
        if let Removal::Parallel { removed, kept } = r {
            for b in &mut bundles {
                let other = if b.bundle1.contains(&kept) {
                    b.bundle1.insert(removed);
                    b.bundle2.clone()
                } else if b.bundle2.contains(&kept) {
                    b.bundle2.insert(removed);
                    b.bundle1.clone()
                } else {
                    continue;
                };
                b.member_crossings
                    .extend(other.iter().map(|&x| CrossingId::new(removed, x)));
            }
        }
    })?;
    Ok(BundlingPlan::new(bundles))
}

/// Extends a drawing of the simplified instance to the original instance,
/// routing every parallel edge right next to its partner.
pub fn reinsert_drawing(s: &Simplification, d: &CombinatorialDrawing) -> Result<CombinatorialDrawing> {
    if d.instance() != &s.simplified {
        return Err(Error::LogMismatch("drawing is not of the simplified instance".into()));
    }
    let m = &s.original;
    let mut along: Vec<Vec<CrossingId>> = vec![Vec::new(); m.m()];
    for (i, seq) in d.along_edge().iter().enumerate() {
        along[s.kept[i]] = seq
            .iter()
            .map(|c| CrossingId::new(s.kept[c.lo()], s.kept[c.hi()]))
            .collect();
    }
    s.replay(|r| {
        if let Removal::Parallel { removed, kept } = r {
            let mut copy: Vec<CrossingId> = along[kept]
                .iter()
                .map(|c| CrossingId::new(removed, c.other(kept)))
                .collect();
            if !same_direction(m, removed, kept) {
                copy.reverse();
            }
            along[removed] = copy;
            for x in along[kept].iter().map(|c| c.other(kept)).collect::<Vec<_>>() {
                let at = along[x]
                    .iter()
                    .position(|&c| c == CrossingId::new(kept, x))
                    .expect("partner crossing present");
                let offset = usize::from(!meets_first(m, x, removed, kept));
                along[x].insert(at + offset, CrossingId::new(removed, x));
            }
        }
    })?;
    CombinatorialDrawing::new(m.clone(), along, None)
}

/// Whether two parallel edges run the same way: nested spans do, while a
/// pair wrapping around the circle has disjoint spans and runs opposite ways.
fn same_direction(m: &MatchingInstance, a: usize, b: usize) -> bool {
    let ((p, q), (s, t)) = (m.span(a), m.span(b));
    (p < s && t < q) || (s < p && q < t)
}

/// Whether edge `x` meets `a` before `b`, for two non-crossing edges that both cross `x`.
pub(crate) fn meets_first(m: &MatchingInstance, x: usize, a: usize, b: usize) -> bool {
    let (s, t) = m.span(x);
    let inside = |e: usize| {
        let (p, q) = m.span(e);
        if s < p && p < t {
            p
        } else {
            q
        }
    };
    inside(a) < inside(b)
}
