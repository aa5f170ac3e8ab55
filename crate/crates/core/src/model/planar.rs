use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{CombinatorialDrawing, CrossingId};

/// Number of interior faces of each degree in the planarization.
///
/// The face outside the boundary cycle is not counted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaceCensus {
    counts: BTreeMap<usize, usize>,
}

impl FaceCensus {
    pub fn f(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Right-hand side of the triangle identity: `4 + sum_{k>=5} (k-4) f_k`.
    pub fn triangle_identity_rhs(&self) -> usize {
        4 + self
            .counts
            .iter()
            .filter(|(&k, _)| k >= 5)
            .map(|(&k, &c)| (k - 4) * c)
            .sum::<usize>()
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    from: usize,
    to: usize,
    /// Chord index, or `None` for a boundary edge.
    owner: Option<usize>,
}

/// The plane graph obtained by turning crossings into degree-4 vertices and
/// closing the circle with the boundary cycle.
///
/// Node `p < n` is the vertex at circular position `p`; crossing nodes follow.
#[derive(Debug, Clone)]
pub struct Planarization {
    n: usize,
    segments: Vec<Segment>,
    faces: Vec<Vec<usize>>,
    outer: Option<usize>,
    crossing_node: BTreeMap<CrossingId, usize>,
}

impl Planarization {
    pub fn build(d: &CombinatorialDrawing) -> Result<Self> {
        let inst = d.instance();
        let n = inst.n();
        let m = inst.m();
        let mut crossing_node = BTreeMap::new();
        for (k, &c) in d.crossings().iter().enumerate() {
            crossing_node.insert(c, n + k);
        }
        let nodes = n + crossing_node.len();
        if n < 2 {
            return Ok(Self {
                n,
                segments: Vec::new(),
                faces: Vec::new(),
                outer: None,
                crossing_node,
            });
        }

        let mut segments = Vec::new();
        // boundary edge p runs from position p to p + 1
        for p in 0..n {
            segments.push(Segment {
                from: p,
                to: (p + 1) % n,
                owner: None,
            });
        }
        // dart 2h leaves segments[h].from, dart 2h + 1 leaves segments[h].to
        let mut chord_dart = vec![None; n];
        // per crossing node: [lo_back, lo_fwd, hi_back, hi_fwd]
        let mut around: BTreeMap<usize, [usize; 4]> = BTreeMap::new();
        for e in 0..m {
            let (s, t) = inst.span(e);
            let seq = d.sequence(e);
            let mut prev = s;
            let mut prev_back_slot: Option<(CrossingId, usize)> = None;
            let waypoints = seq
                .iter()
                .map(|c| (Some(*c), crossing_node[c]))
                .chain(std::iter::once((None, t)));
            for (c, node) in waypoints {
                let h = segments.len();
                segments.push(Segment {
                    from: prev,
                    to: node,
                    owner: Some(e),
                });
                if prev == s {
                    chord_dart[s] = Some(2 * h);
                }
                if let Some((pc, slot)) = prev_back_slot {
                    around.entry(crossing_node[&pc]).or_insert([usize::MAX; 4])[slot + 1] = 2 * h;
                }
                match c {
                    Some(c) => {
                        let slot = if c.lo() == e { 0 } else { 2 };
                        around.entry(node).or_insert([usize::MAX; 4])[slot] = 2 * h + 1;
                        prev_back_slot = Some((c, slot));
                    }
                    None => chord_dart[t] = Some(2 * h + 1),
                }
                prev = node;
            }
        }

        // counter-clockwise rotation of darts around every node
        let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        for p in 0..n {
            let prev_boundary = (p + n - 1) % n;
            rotation[p].push(2 * p);
            if let Some(dart) = chord_dart[p] {
                rotation[p].push(dart);
            }
            rotation[p].push(2 * prev_boundary + 1);
        }
        for (&c, &node) in &crossing_node {
            let [lo_back, lo_fwd, hi_back, hi_fwd] = around[&node];
            // the edge starting first is crossed from its right side to its left
            let (a_back, a_fwd, b_back, b_fwd) = if inst.span(c.lo()).0 < inst.span(c.hi()).0 {
                (lo_back, lo_fwd, hi_back, hi_fwd)
            } else {
                (hi_back, hi_fwd, lo_back, lo_fwd)
            };
            rotation[node] = vec![b_back, a_fwd, b_fwd, a_back];
        }

        let darts = 2 * segments.len();
        let mut slot_of = vec![(0usize, 0usize); darts];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &dart) in rot.iter().enumerate() {
                slot_of[dart] = (v, i);
            }
        }
        let mut face_of = vec![usize::MAX; darts];
        let mut faces = Vec::new();
        for start in 0..darts {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut cycle = Vec::new();
            let mut dart = start;
            while face_of[dart] == usize::MAX {
                face_of[dart] = id;
                cycle.push(dart);
                let (v, i) = slot_of[dart ^ 1];
                let deg = rotation[v].len();
                dart = rotation[v][(i + deg - 1) % deg];
            }
            faces.push(cycle);
        }

        let euler = nodes as i64 - segments.len() as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(Error::NonPlanarDrawing(euler));
        }
        // reverse boundary darts trace the face outside the circle
        let outer = face_of[1];
        Ok(Self {
            n,
            segments,
            faces,
            outer: Some(outer),
            crossing_node,
        })
    }

    fn dart_tail(&self, dart: usize) -> usize {
        let s = self.segments[dart / 2];
        if dart.is_multiple_of(2) {
            s.from
        } else {
            s.to
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn crossing_node(&self, c: CrossingId) -> Option<usize> {
        self.crossing_node.get(&c).copied()
    }

    /// Interior faces as node cycles paired with the chords bounding them.
    pub fn interior_faces(&self) -> impl Iterator<Item = (Vec<usize>, Vec<Option<usize>>)> + '_ {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(id, _)| Some(*id) != self.outer)
            .map(move |(_, cycle)| {
                let nodes = cycle.iter().map(|&d| self.dart_tail(d)).collect();
                let owners = cycle.iter().map(|&d| self.segments[d / 2].owner).collect();
                (nodes, owners)
            })
    }

    pub fn census(&self) -> FaceCensus {
        let mut counts = BTreeMap::new();
        for (id, cycle) in self.faces.iter().enumerate() {
            if Some(id) != self.outer {
                *counts.entry(cycle.len()).or_insert(0) += 1;
            }
        }
        FaceCensus { counts }
    }
}

/// Face census of the planarization of `d`; fails if the drawing cannot be
/// embedded in the disk.
pub fn planarize(d: &CombinatorialDrawing) -> Result<FaceCensus> {
    Ok(Planarization::build(d)?.census())
}
