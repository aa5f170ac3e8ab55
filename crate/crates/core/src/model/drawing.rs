use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::Polyline;
use crate::model::{forced_crossing_pairs, planarize, CrossingId, MatchingInstance, Planarization};

/// A drawing of a matching instance inside the disk, described by the order in
/// which each edge meets its crossings.
///
/// `along_edge[e]` runs from the endpoint of `e` with the smaller circular
/// position to the other one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialDrawing {
    instance: MatchingInstance,
    crossings: BTreeSet<CrossingId>,
    along_edge: Vec<Vec<CrossingId>>,
    geometry: Option<Vec<Polyline>>,
}

impl CombinatorialDrawing {
    /// Builds a drawing and checks that it is simple and realizable in the disk.
    pub fn new(
        instance: MatchingInstance,
        along_edge: Vec<Vec<CrossingId>>,
        geometry: Option<Vec<Polyline>>,
    ) -> Result<Self> {
        let drawing = Self::from_parts(instance, along_edge)?;
        Planarization::build(&drawing)?;
        drawing.with_geometry(geometry)
    }

    /// Checks the crossing sequences but not realizability.
    pub(crate) fn from_parts(
        instance: MatchingInstance,
        along_edge: Vec<Vec<CrossingId>>,
    ) -> Result<Self> {
        let m = instance.m();
        if along_edge.len() != m {
            return Err(Error::InvalidDrawing(format!(
                "{} crossing sequences for {m} edges",
                along_edge.len()
            )));
        }
        let forced = forced_crossing_pairs(&instance);
        let mut seen = BTreeSet::new();
        for (e, seq) in along_edge.iter().enumerate() {
            let mut own = BTreeSet::new();
            for &c in seq {
                if !c.involves(e) {
                    return Err(Error::InvalidDrawing(format!(
                        "crossing {c} listed on edge {e}"
                    )));
                }
                if c.hi() >= m {
                    return Err(Error::UnknownCrossing(c));
                }
                if !own.insert(c) {
                    return Err(Error::InvalidDrawing(format!(
                        "crossing {c} repeated on edge {e}"
                    )));
                }
                seen.insert(c);
            }
        }
        for &c in &seen {
            let on_lo = along_edge[c.lo()].contains(&c);
            let on_hi = along_edge[c.hi()].contains(&c);
            if !(on_lo && on_hi) {
                return Err(Error::InvalidDrawing(format!(
                    "crossing {c} missing from one of its edges"
                )));
            }
        }
        if seen != forced {
            let extra = seen.difference(&forced).next();
            let missing = forced.difference(&seen).next();
            return Err(Error::InvalidDrawing(match (extra, missing) {
                (Some(c), _) => format!("crossing {c} is not forced by the circular order"),
                (_, Some(c)) => format!("forced crossing {c} is missing"),
                _ => unreachable!(),
            }));
        }
        Ok(Self {
            instance,
            crossings: seen,
            along_edge,
            geometry: None,
        })
    }

    pub fn with_geometry(mut self, geometry: Option<Vec<Polyline>>) -> Result<Self> {
        if let Some(g) = &geometry {
            if g.len() != self.instance.m() {
                return Err(Error::InvalidDrawing(format!(
                    "{} polylines for {} edges",
                    g.len(),
                    self.instance.m()
                )));
            }
        }
        self.geometry = geometry;
        Ok(self)
    }

    pub fn instance(&self) -> &MatchingInstance {
        &self.instance
    }

    pub fn crossings(&self) -> &BTreeSet<CrossingId> {
        &self.crossings
    }

    pub fn along_edge(&self) -> &[Vec<CrossingId>] {
        &self.along_edge
    }

    pub fn sequence(&self, e: usize) -> &[CrossingId] {
        &self.along_edge[e]
    }

    pub fn geometry(&self) -> Option<&[Polyline]> {
        self.geometry.as_deref()
    }

    /// Index of crossing `c` within the sequence of edge `e`.
    pub fn index_on(&self, e: usize, c: CrossingId) -> Option<usize> {
        self.along_edge[e].iter().position(|&x| x == c)
    }

    /// Interior face census of the planarization.
    pub fn census(&self) -> crate::model::FaceCensus {
        planarize(self).expect("drawing was checked at construction")
    }
}
