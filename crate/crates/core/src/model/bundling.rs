use std::collections::{BTreeMap, BTreeSet};

use crate::model::CrossingId;

/// Crossings between two edge bundles, one crossing per pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BundledCrossing {
    pub bundle1: BTreeSet<usize>,
    pub bundle2: BTreeSet<usize>,
    pub member_crossings: BTreeSet<CrossingId>,
}

impl BundledCrossing {
    /// The full grid `bundle1 x bundle2`. Shared edges are skipped.
    pub fn grid(bundle1: BTreeSet<usize>, bundle2: BTreeSet<usize>) -> Self {
        let member_crossings = bundle1
            .iter()
            .flat_map(|&a| bundle2.iter().filter(move |&&b| b != a).map(move |&b| CrossingId::new(a, b)))
            .collect();
        Self {
            bundle1,
            bundle2,
            member_crossings,
        }
    }

    pub fn single(a: usize, b: usize) -> Self {
        Self::grid(BTreeSet::from([a]), BTreeSet::from([b]))
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.bundle1.iter().chain(self.bundle2.iter()).copied()
    }

    pub fn len(&self) -> usize {
        self.member_crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_crossings.is_empty()
    }
}

/// A partition of the crossings of a drawing into bundled crossings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BundlingPlan {
    pub bundles: Vec<BundledCrossing>,
}

impl BundlingPlan {
    pub fn new(bundles: Vec<BundledCrossing>) -> Self {
        Self { bundles }
    }

    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }

    /// Map from crossing to the bundles listing it.
    pub fn assignment(&self) -> BTreeMap<CrossingId, Vec<usize>> {
        let mut out: BTreeMap<CrossingId, Vec<usize>> = BTreeMap::new();
        for (i, b) in self.bundles.iter().enumerate() {
            for &c in &b.member_crossings {
                out.entry(c).or_default().push(i);
            }
        }
        out
    }
}
