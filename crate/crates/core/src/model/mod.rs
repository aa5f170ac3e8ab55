//! Instances, drawings, bundling plans and the bundled-crossing validator.

mod bundling;
mod drawing;
mod instance;
mod planar;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use bundling::{BundledCrossing, BundlingPlan};
pub use drawing::CombinatorialDrawing;
pub use instance::{
    forced_crossing_pairs, interleaves, to_matching, CircularInstance, Edge, MatchingInstance,
};
pub use planar::{planarize, FaceCensus, Planarization};
pub use validate::{validate_bundling, BundleCheck, ValidationReport, Violation};

/// A crossing between two edges, identified by the sorted pair of edge indices.
///
/// Simple drawings have at most one crossing per edge pair, so the pair is unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct CrossingId(usize, usize);

impl CrossingId {
    /// Panics if `a == b`.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "an edge cannot cross itself");
        Self(a.min(b), a.max(b))
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    pub fn involves(self, e: usize) -> bool {
        self.0 == e || self.1 == e
    }

    /// The edge crossing `e` here. Panics if `e` is not involved.
    pub fn other(self, e: usize) -> usize {
        if self.0 == e {
            self.1
        } else {
            assert_eq!(self.1, e);
            self.0
        }
    }
}

impl From<CrossingId> for [usize; 2] {
    fn from(c: CrossingId) -> Self {
        [c.0, c.1]
    }
}

impl TryFrom<[usize; 2]> for CrossingId {
    type Error = String;

    fn try_from(v: [usize; 2]) -> Result<Self, Self::Error> {
        if v[0] == v[1] {
            return Err(format!("crossing of edge {} with itself", v[0]));
        }
        Ok(Self::new(v[0], v[1]))
    }
}

impl fmt::Display for CrossingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}
