use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::CrossingId;

/// An undirected edge given by its two vertex ids.
pub type Edge = (usize, usize);

/// Vertices placed on a circle in a fixed order, with chords as edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularInstance {
    n: usize,
    order: Vec<usize>,
    edges: Vec<Edge>,
    pos: Vec<usize>,
}

impl CircularInstance {
    /// `order[p]` is the vertex at circular position `p`.
    pub fn new(n: usize, order: Vec<usize>, edges: Vec<Edge>) -> Result<Self> {
        if order.len() != n {
            return Err(Error::InvalidInstance(format!(
                "order has {} entries, expected {n}",
                order.len()
            )));
        }
        let mut pos = vec![usize::MAX; n];
        for (p, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::InvalidInstance("order is not a permutation".into()));
            }
            pos[v] = p;
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Self {
            n,
            order,
            edges,
            pos,
        })
    }

    pub fn with_identity_order(n: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::new(n, (0..n).collect(), edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    /// Circular position of vertex `v`.
    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    /// Endpoint positions of edge `e`, smaller first.
    pub fn span(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.edges[e];
        let (a, b) = (self.pos[u], self.pos[v]);
        (a.min(b), a.max(b))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn is_matching(&self) -> bool {
        self.degrees().iter().all(|&d| d <= 1)
    }

    /// True if the edge set is that of the complete graph on all `n` vertices.
    pub fn is_complete(&self) -> bool {
        self.n >= 1 && self.m() == self.n * (self.n - 1) / 2
    }

    /// Instance with the circular order rotated by `shift` positions.
    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.n;
        let order = (0..n).map(|p| self.order[(p + shift) % n.max(1)]).collect();
        Self::new(n, order, self.edges.clone()).expect("rotation preserves validity")
    }

    /// Instance with the circular order reversed.
    pub fn reflected(&self) -> Self {
        let order = self.order.iter().rev().copied().collect();
        Self::new(self.n, order, self.edges.clone()).expect("reflection preserves validity")
    }
}

/// True iff `e1` and `e2` alternate around the circle.
pub fn interleaves(e1: Edge, e2: Edge, inst: &CircularInstance) -> Result<bool> {
    if e1.0 == e2.0 || e1.0 == e2.1 || e1.1 == e2.0 || e1.1 == e2.1 {
        return Err(Error::AdjacentEdges(e1, e2));
    }
    let (a0, a1) = sorted(inst.position(e1.0), inst.position(e1.1));
    let (b0, b1) = sorted(inst.position(e2.0), inst.position(e2.1));
    Ok(spans_interleave((a0, a1), (b0, b1)))
}

fn sorted(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Interleaving test on sorted position spans with four distinct positions.
pub(crate) fn spans_interleave(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

/// A circular instance in which every vertex has degree at most one.
///
/// `origin_map[slot]` is the vertex of the instance this matching was expanded from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingInstance {
    base: CircularInstance,
    origin_map: Vec<usize>,
}

impl MatchingInstance {
    pub fn new(base: CircularInstance, origin_map: Vec<usize>) -> Result<Self> {
        if !base.is_matching() {
            return Err(Error::InvalidInstance("a vertex has degree > 1".into()));
        }
        if origin_map.len() != base.n() {
            return Err(Error::InvalidInstance("origin map length mismatch".into()));
        }
        // slots of one origin vertex form one cyclic run
        let order = base.order();
        let len = order.len();
        let mut runs = std::collections::BTreeMap::new();
        for p in 0..len {
            let o = origin_map[order[p]];
            if o != origin_map[order[(p + len - 1) % len]] {
                *runs.entry(o).or_insert(0usize) += 1;
            }
        }
        if let Some((o, _)) = runs.iter().find(|(_, &c)| c > 1) {
            return Err(Error::InvalidInstance(format!(
                "slots of vertex {o} are not consecutive"
            )));
        }
        Ok(Self { base, origin_map })
    }

    /// Wraps an instance that is already a matching, with identity origin map.
    pub fn from_matching(base: CircularInstance) -> Result<Self> {
        let n = base.n();
        Self::new(base, (0..n).collect())
    }

    pub fn base(&self) -> &CircularInstance {
        &self.base
    }

    pub fn origin_map(&self) -> &[usize] {
        &self.origin_map
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn m(&self) -> usize {
        self.base.m()
    }

    pub fn span(&self, e: usize) -> (usize, usize) {
        self.base.span(e)
    }

    /// Whether two distinct edges of the matching must cross.
    pub fn crosses(&self, e: usize, f: usize) -> bool {
        e != f && spans_interleave(self.span(e), self.span(f))
    }

    /// Edge index incident to the vertex at circular position `p`, if any.
    pub fn edge_at_position(&self) -> Vec<Option<usize>> {
        let mut at = vec![None; self.n()];
        for e in 0..self.m() {
            let (a, b) = self.span(e);
            at[a] = Some(e);
            at[b] = Some(e);
        }
        at
    }
}

/// Replaces every vertex of degree `d` by `d` consecutive slots so that the
/// result is a matching in which no two formerly adjacent edges interleave.
pub fn to_matching(inst: &CircularInstance) -> MatchingInstance {
    if inst.is_matching() {
        return MatchingInstance::from_matching(inst.clone()).expect("matching input");
    }
    let n = inst.n();
    // edges incident to each vertex, with the target's circular distance
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in inst.edges().iter().enumerate() {
        for (a, b) in [(u, v), (v, u)] {
            let dist = (inst.position(b) + n - inst.position(a)) % n;
            incident[a].push((dist, e));
        }
    }
    let mut slot_of: Vec<[usize; 2]> = vec![[usize::MAX; 2]; inst.m()];
    let mut origin_map = Vec::with_capacity(2 * inst.m());
    for &v in inst.order() {
        let mut fan = incident[v].clone();
        // farthest target takes the first slot, nearest the last
        fan.sort_by(|a, b| b.cmp(a));
        for (_, e) in fan {
            let slot = origin_map.len();
            origin_map.push(v);
            let side = if inst.edge(e).0 == v { 0 } else { 1 };
            slot_of[e][side] = slot;
        }
    }
    let slots = origin_map.len();
    let edges = slot_of.iter().map(|s| (s[0], s[1])).collect();
    let base = CircularInstance::with_identity_order(slots, edges).expect("slots are valid");
    MatchingInstance::new(base, origin_map).expect("fan expansion is a matching")
}

/// The pairs of edges that interleave and therefore cross in every circular drawing.
pub fn forced_crossing_pairs(m: &MatchingInstance) -> BTreeSet<CrossingId> {
    let mut out = BTreeSet::new();
    for e in 0..m.m() {
        for f in e + 1..m.m() {
            if m.crosses(e, f) {
                out.insert(CrossingId::new(e, f));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ident(n: usize, edges: &[Edge]) -> CircularInstance {
        CircularInstance::with_identity_order(n, edges.to_vec()).unwrap()
    }

    #[test]
    fn interleaving_examples() {
        let inst = ident(4, &[]);
        assert!(interleaves((0, 2), (1, 3), &inst).unwrap());
        assert!(!interleaves((0, 1), (2, 3), &inst).unwrap());
        let perm = CircularInstance::new(6, vec![0, 2, 4, 1, 3, 5], vec![]).unwrap();
        assert!(interleaves((0, 1), (2, 3), &perm).unwrap());
    }

    #[test]
    fn interleaving_rejects_adjacent_edges() {
        let inst = ident(4, &[]);
        assert!(matches!(
            interleaves((0, 2), (2, 3), &inst),
            Err(Error::AdjacentEdges(..))
        ));
    }

    #[test]
    fn instance_invariants() {
        assert!(CircularInstance::new(3, vec![0, 0, 1], vec![]).is_err());
        assert!(CircularInstance::with_identity_order(3, vec![(0, 0)]).is_err());
        assert!(CircularInstance::with_identity_order(3, vec![(0, 3)]).is_err());
        assert!(CircularInstance::with_identity_order(3, vec![(0, 1), (1, 0)]).is_err());
    }

    fn no_former_neighbours_interleave(inst: &CircularInstance, m: &MatchingInstance) {
        for e in 0..inst.m() {
            for f in e + 1..inst.m() {
                let (a, b) = (inst.edge(e), inst.edge(f));
                let adjacent = a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
                if adjacent {
                    assert!(!m.crosses(e, f), "edges {e} and {f} interleave after expansion");
                } else {
                    assert_eq!(m.crosses(e, f), interleaves(a, b, inst).unwrap());
                }
            }
        }
    }

    #[test]
    fn triangle_expands_to_crossing_free_matching() {
        let tri = ident(3, &[(0, 1), (1, 2), (2, 0)]);
        let m = to_matching(&tri);
        assert_eq!(m.n(), 6);
        assert_eq!(m.m(), 3);
        assert!(forced_crossing_pairs(&m).is_empty());
        no_former_neighbours_interleave(&tri, &m);
    }

    #[test]
    fn star_expands_to_fan() {
        let star = ident(4, &[(0, 1), (0, 2), (0, 3)]);
        let m = to_matching(&star);
        assert_eq!(m.n(), 6);
        assert!(forced_crossing_pairs(&m).is_empty());
        assert_eq!(&m.origin_map()[..3], &[0, 0, 0]);
    }

    #[test]
    fn matching_input_is_unchanged() {
        let inst = CircularInstance::new(4, vec![2, 0, 3, 1], vec![(0, 1), (2, 3)]).unwrap();
        let m = to_matching(&inst);
        assert_eq!(m.base(), &inst);
        assert_eq!(m.origin_map(), &[0, 1, 2, 3]);
    }

    #[test]
    fn k5_expansion_keeps_crossing_pairs() {
        let edges: Vec<Edge> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let k5 = ident(5, &edges);
        let m = to_matching(&k5);
        assert_eq!(m.n(), 20);
        no_former_neighbours_interleave(&k5, &m);
        assert_eq!(forced_crossing_pairs(&m).len(), 5);
    }

    #[test]
    fn forced_pairs_examples() {
        let m = MatchingInstance::from_matching(ident(6, &[(0, 3), (1, 4), (2, 5)])).unwrap();
        assert_eq!(forced_crossing_pairs(&m).len(), 3);
        let m = MatchingInstance::from_matching(ident(4, &[(0, 1), (2, 3)])).unwrap();
        assert!(forced_crossing_pairs(&m).is_empty());
        let m = MatchingInstance::from_matching(ident(0, &[])).unwrap();
        assert!(forced_crossing_pairs(&m).is_empty());
    }

    #[test]
    fn origin_runs_must_be_consecutive() {
        let base = ident(4, &[(0, 2), (1, 3)]);
        assert!(MatchingInstance::new(base.clone(), vec![0, 1, 0, 2]).is_err());
        assert!(MatchingInstance::new(base, vec![0, 1, 2, 0]).is_ok());
    }
}
