use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{BundledCrossing, BundlingPlan, CombinatorialDrawing, CrossingId, Planarization};

/// A reason a bundling plan is not a valid partition into bundled crossings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A crossing of the drawing belongs to no bundle.
    Uncovered(CrossingId),
    /// A crossing is listed by more than one bundle.
    MultiplyCovered(CrossingId, Vec<usize>),
    EmptyBundle(usize),
    /// An edge sits on both sides of one bundle.
    SharedEdge { bundle: usize, edge: usize },
    /// The members are not exactly one crossing per pair of the two bundles.
    NotAGrid {
        bundle: usize,
        missing: Option<CrossingId>,
        stray: Option<CrossingId>,
    },
    /// The bundle's crossings on this edge are interrupted by other crossings.
    NotConsecutive { bundle: usize, edge: usize },
    /// The opposite bundle is met in different orders along this edge.
    OrderMismatch { bundle: usize, edge: usize },
    /// Some grid cell is not an empty quadrilateral face.
    NotSeparable { bundle: usize },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::Uncovered(_) | Violation::MultiplyCovered(..) => "not a partition",
            Violation::EmptyBundle(_) => "empty bundle",
            Violation::SharedEdge { .. } => "shared edge",
            Violation::NotAGrid { .. } => "not a grid",
            Violation::NotConsecutive { .. } => "not consecutive",
            Violation::OrderMismatch { .. } => "order mismatch",
            Violation::NotSeparable { .. } => "not separable",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name())?;
        match self {
            Violation::Uncovered(c) => write!(f, "crossing {c} is in no bundle"),
            Violation::MultiplyCovered(c, bs) => write!(f, "crossing {c} is in bundles {bs:?}"),
            Violation::EmptyBundle(b) => write!(f, "bundle {b} has an empty side"),
            Violation::SharedEdge { bundle, edge } => {
                write!(f, "edge {edge} is on both sides of bundle {bundle}")
            }
            Violation::NotAGrid {
                bundle,
                missing,
                stray,
            } => match (missing, stray) {
                (Some(c), _) => write!(f, "bundle {bundle} lacks crossing {c}"),
                (_, Some(c)) => write!(f, "bundle {bundle} holds foreign crossing {c}"),
                _ => write!(f, "bundle {bundle}"),
            },
            Violation::NotConsecutive { bundle, edge } => {
                write!(f, "bundle {bundle} is interrupted along edge {edge}")
            }
            Violation::OrderMismatch { bundle, edge } => {
                write!(f, "bundle {bundle} is met in a different order along edge {edge}")
            }
            Violation::NotSeparable { bundle } => {
                write!(f, "bundle {bundle} encloses a non-quadrilateral cell")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Per-bundle validity checks against one drawing.
pub struct BundleCheck<'a> {
    drawing: &'a CombinatorialDrawing,
    planar: Planarization,
    quads: BTreeMap<[usize; 4], Vec<Option<usize>>>,
}

impl<'a> BundleCheck<'a> {
    pub fn new(drawing: &'a CombinatorialDrawing) -> Result<Self> {
        let planar = Planarization::build(drawing)?;
        let quads = planar
            .interior_faces()
            .filter(|(nodes, _)| nodes.len() == 4)
            .map(|(nodes, owners)| {
                let mut key = [nodes[0], nodes[1], nodes[2], nodes[3]];
                key.sort_unstable();
                (key, owners)
            })
            .collect();
        Ok(Self {
            drawing,
            planar,
            quads,
        })
    }

    pub fn is_valid(&self, b: &BundledCrossing) -> bool {
        self.check(0, b).is_empty()
    }

    /// Grid, consecutiveness, order and separation conditions for one bundle.
    pub fn check(&self, idx: usize, b: &BundledCrossing) -> Vec<Violation> {
        let mut out = Vec::new();
        if b.bundle1.is_empty() || b.bundle2.is_empty() {
            out.push(Violation::EmptyBundle(idx));
            return out;
        }
        if let Some(&edge) = b.bundle1.intersection(&b.bundle2).next() {
            out.push(Violation::SharedEdge { bundle: idx, edge });
            return out;
        }
        let grid: BTreeSet<CrossingId> = BundledCrossing::grid(b.bundle1.clone(), b.bundle2.clone())
            .member_crossings;
        let missing = grid
            .iter()
            .find(|c| !b.member_crossings.contains(c) || !self.drawing.crossings().contains(c))
            .copied();
        let stray = b.member_crossings.difference(&grid).next().copied();
        if missing.is_some() || stray.is_some() {
            out.push(Violation::NotAGrid {
                bundle: idx,
                missing,
                stray,
            });
            return out;
        }

        let mut orders = Vec::new();
        for (side, other) in [(&b.bundle1, &b.bundle2), (&b.bundle2, &b.bundle1)] {
            let mut reference: Option<Vec<usize>> = None;
            for &e in side {
                let seq = self.drawing.sequence(e);
                let hits: Vec<(usize, usize)> = seq
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| other.contains(&c.other(e)))
                    .map(|(i, c)| (i, c.other(e)))
                    .collect();
                let first = hits.first().map_or(0, |h| h.0);
                let last = hits.last().map_or(0, |h| h.0);
                if last + 1 - first != hits.len() {
                    out.push(Violation::NotConsecutive { bundle: idx, edge: e });
                    continue;
                }
                let met: Vec<usize> = hits.iter().map(|h| h.1).collect();
                match &reference {
                    None => reference = Some(met),
                    Some(r) => {
                        let reversed: Vec<usize> = r.iter().rev().copied().collect();
                        if met != *r && met != reversed {
                            out.push(Violation::OrderMismatch { bundle: idx, edge: e });
                        }
                    }
                }
            }
            orders.push(reference.unwrap_or_default());
        }
        if !out.is_empty() {
            return out;
        }

        // orders[0]: bundle2 along a bundle1 edge; orders[1]: bundle1 along a bundle2 edge
        let (cols, rows) = (&orders[0], &orders[1]);
        let node = |a: usize, b: usize| {
            self.planar
                .crossing_node(CrossingId::new(a, b))
                .expect("grid crossings exist")
        };
        for r in rows.windows(2) {
            for c in cols.windows(2) {
                let mut key = [node(r[0], c[0]), node(r[0], c[1]), node(r[1], c[0]), node(r[1], c[1])];
                key.sort_unstable();
                let ok = self.quads.get(&key).is_some_and(|owners| {
                    owners
                        .iter()
                        .all(|o| o.is_some_and(|e| b.bundle1.contains(&e) || b.bundle2.contains(&e)))
                });
                if !ok {
                    out.push(Violation::NotSeparable { bundle: idx });
                    return out;
                }
            }
        }
        out
    }
}

/// Checks that `p` partitions the crossings of `d` into bundled crossings.
pub fn validate_bundling(d: &CombinatorialDrawing, p: &BundlingPlan) -> Result<ValidationReport> {
    let m = d.instance().m();
    for b in &p.bundles {
        if let Some(e) = b.edges().find(|&e| e >= m) {
            return Err(Error::UnknownId {
                kind: "edge",
                id: e.to_string(),
            });
        }
        for &c in &b.member_crossings {
            if c.hi() >= m || !d.crossings().contains(&c) {
                return Err(Error::UnknownCrossing(c));
            }
        }
    }
    let mut violations = Vec::new();
    let assignment = p.assignment();
    for &c in d.crossings() {
        match assignment.get(&c) {
            None => violations.push(Violation::Uncovered(c)),
            Some(bs) if bs.len() > 1 => violations.push(Violation::MultiplyCovered(c, bs.clone())),
            _ => {}
        }
    }
    let check = BundleCheck::new(d)?;
    for (i, b) in p.bundles.iter().enumerate() {
        violations.extend(check.check(i, b));
    }
    Ok(ValidationReport { violations })
}
