//! Exact fixed-order bundled crossing number for tiny instances.
//!
//! Enumerates every realizable order of crossings along the edges, then
//! searches for a smallest exact cover of the crossings by valid bundles.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::wiring_geometry;
use crate::model::{BundleCheck, BundledCrossing, BundlingPlan, CombinatorialDrawing, CrossingId, MatchingInstance};
use crate::simplify::{meets_first, reinsert, reinsert_drawing, simplify};

pub const DEFAULT_MAX_EDGES: usize = 6;
/// Crossing sets are bitmasks, so `m(m-1)/2` must stay below 64.
pub const HARD_MAX_EDGES: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub max_edges: usize,
    pub max_k: Option<usize>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            max_edges: DEFAULT_MAX_EDGES,
            max_k: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub embeddings: usize,
    /// Nodes visited by the cover search.
    pub partitions: usize,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub optimum: usize,
    pub drawing: CombinatorialDrawing,
    pub plan: BundlingPlan,
    pub stats: SearchStats,
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub witness: Option<(CombinatorialDrawing, BundlingPlan)>,
    pub stats: SearchStats,
}

fn check_size(m: usize, cap: usize) -> Result<()> {
    if m > cap.min(HARD_MAX_EDGES) {
        return Err(Error::TooLargeForOracle { edges: m, cap: cap.min(HARD_MAX_EDGES) });
    }
    Ok(())
}

/// Every realizable drawing of `m`, in lexicographic order of the crossing
/// sequences along edges 0, 1, ...
pub fn enumerate_embeddings(m: &MatchingInstance, max_edges: usize) -> Result<Vec<CombinatorialDrawing>> {
    check_size(m.m(), max_edges)?;
    Ok(Embeddings::new(m).all())
}

struct Embeddings<'a> {
    m: &'a MatchingInstance,
    crossers: Vec<Vec<usize>>,
    /// Rank of each crosser in the two-slope order along the edge.
    reference: Vec<Vec<usize>>,
}

impl<'a> Embeddings<'a> {
    fn new(m: &'a MatchingInstance) -> Self {
        let count = m.m();
        let crossers: Vec<Vec<usize>> = (0..count)
            .map(|x| (0..count).filter(|&f| m.crosses(x, f)).collect())
            .collect();
        let reference = (0..count)
            .map(|x| {
                let sx = m.span(x).0;
                let key = |f: usize| {
                    let (s, t) = m.span(f);
                    if s < sx {
                        (0, t)
                    } else {
                        (1, s)
                    }
                };
                let mut sorted = crossers[x].clone();
                sorted.sort_by_key(|&f| key(f));
                let mut rank = vec![usize::MAX; count];
                for (r, &f) in sorted.iter().enumerate() {
                    rank[f] = r;
                }
                rank
            })
            .collect();
        Self { m, crossers, reference }
    }

    fn all(&self) -> Vec<CombinatorialDrawing> {
        let count = self.m.m();
        let mut out = Vec::new();
        let mut orders = Vec::with_capacity(count);
        let mut positions = vec![vec![usize::MAX; count]; count];
        self.assign(0, &mut orders, &mut positions, &mut out);
        out
    }

    fn assign(
        &self,
        x: usize,
        orders: &mut Vec<Vec<usize>>,
        positions: &mut Vec<Vec<usize>>,
        out: &mut Vec<CombinatorialDrawing>,
    ) {
        if x == self.m.m() {
            let along = orders
                .iter()
                .enumerate()
                .map(|(e, seq)| seq.iter().map(|&f| CrossingId::new(e, f)).collect())
                .collect();
            match CombinatorialDrawing::new(self.m.clone(), along, None) {
                Ok(d) => out.push(d),
                Err(Error::NonPlanarDrawing(_)) => {}
                Err(e) => panic!("enumerated drawing is malformed: {e}"),
            }
            return;
        }
        for perm in self.extensions(x) {
            for (i, &f) in perm.iter().enumerate() {
                positions[x][f] = i;
            }
            if self.triples_agree(x, positions) {
                orders.push(perm);
                self.assign(x + 1, orders, positions, out);
                orders.pop();
            }
        }
    }

    /// Orders of the crossers of `x` that respect the forced order of every
    /// non-crossing pair, in lexicographic order.
    fn extensions(&self, x: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        let mut left: BTreeSet<usize> = self.crossers[x].iter().copied().collect();
        self.extend(x, &mut prefix, &mut left, &mut out);
        out
    }

    fn extend(&self, x: usize, prefix: &mut Vec<usize>, left: &mut BTreeSet<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for f in left.clone() {
            let blocked = left
                .iter()
                .any(|&g| g != f && !self.m.crosses(f, g) && meets_first(self.m, x, g, f));
            if blocked {
                continue;
            }
            left.remove(&f);
            prefix.push(f);
            self.extend(x, prefix, left, out);
            prefix.pop();
            left.insert(f);
        }
    }

    /// Three mutually crossing edges either keep the reference triangle or
    /// flip it as a whole. Checked as soon as two of the three are ordered.
    fn triples_agree(&self, x: usize, positions: &[Vec<usize>]) -> bool {
        let flipped = |e: usize, f: usize, g: usize| {
            (positions[e][f] < positions[e][g]) != (self.reference[e][f] < self.reference[e][g])
        };
        let cs = &self.crossers[x];
        cs.iter().take_while(|&&a| a < x).all(|&a| {
            cs.iter()
                .filter(|&&b| b != a && self.m.crosses(a, b))
                .all(|&b| flipped(x, a, b) == flipped(a, b, x))
        })
    }
}

/// Candidate bundles `E1 x E2` in which every pair crosses, independent of the drawing.
fn grid_candidates(m: &MatchingInstance, crossings: &[CrossingId]) -> Vec<(BundledCrossing, u64)> {
    let count = m.m();
    let mut out = Vec::new();
    let total = 3usize.pow(count as u32);
    for code in 0..total {
        let mut sides = [BTreeSet::new(), BTreeSet::new()];
        let mut c = code;
        for e in 0..count {
            match c % 3 {
                1 => {
                    sides[0].insert(e);
                }
                2 => {
                    sides[1].insert(e);
                }
                _ => {}
            }
            c /= 3;
        }
        let [e1, e2] = sides;
        let (Some(&a), Some(&b)) = (e1.first(), e2.first()) else {
            continue;
        };
        if a > b || !e1.iter().all(|&f| e2.iter().all(|&g| m.crosses(f, g))) {
            continue;
        }
        let bundle = BundledCrossing::grid(e1, e2);
        let mask = bundle
            .member_crossings
            .iter()
            .map(|c| 1u64 << crossings.binary_search(c).expect("grid pair crosses"))
            .fold(0, |acc, bit| acc | bit);
        out.push((bundle, mask));
    }
    out.sort_by(|(p, pm), (q, qm)| {
        qm.count_ones()
            .cmp(&pm.count_ones())
            .then_with(|| (&p.bundle1, &p.bundle2).cmp(&(&q.bundle1, &q.bundle2)))
    });
    out
}

/// Search state for one instance; embeddings and candidates are reused across budgets.
struct Solver {
    embeddings: Vec<CombinatorialDrawing>,
    crossings: Vec<CrossingId>,
    /// Per embedding, the valid candidates grouped by the crossings they contain.
    covers: Vec<Vec<Vec<usize>>>,
    candidates: Vec<(BundledCrossing, u64)>,
    valid: Vec<Vec<bool>>,
    stats: SearchStats,
}

impl Solver {
    fn new(m: &MatchingInstance) -> Self {
        let embeddings = Embeddings::new(m).all();
        let crossings: Vec<CrossingId> = crate::model::forced_crossing_pairs(m).into_iter().collect();
        let candidates = grid_candidates(m, &crossings);
        let mut covers = Vec::with_capacity(embeddings.len());
        let mut valid = Vec::with_capacity(embeddings.len());
        for d in &embeddings {
            let check = BundleCheck::new(d).expect("enumerated drawings are realizable");
            let ok: Vec<bool> = candidates.iter().map(|(b, _)| check.is_valid(b)).collect();
            let by_crossing = (0..crossings.len())
                .map(|i| {
                    (0..candidates.len())
                        .filter(|&c| ok[c] && candidates[c].1 >> i & 1 == 1)
                        .collect()
                })
                .collect();
            covers.push(by_crossing);
            valid.push(ok);
        }
        let stats = SearchStats {
            embeddings: embeddings.len(),
            partitions: 0,
        };
        Self {
            embeddings,
            crossings,
            covers,
            candidates,
            valid,
            stats,
        }
    }

    fn full_mask(&self) -> u64 {
        if self.crossings.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.crossings.len())
        }
    }

    /// First embedding, in enumeration order, whose crossings split into at most `k` bundles.
    fn decide(&mut self, k: usize) -> Option<(CombinatorialDrawing, BundlingPlan)> {
        let largest = self.candidates.first().map_or(0, |c| c.1.count_ones() as usize);
        for i in 0..self.embeddings.len() {
            let widest = (0..self.candidates.len())
                .filter(|&c| self.valid[i][c])
                .map(|c| self.candidates[c].1.count_ones() as usize)
                .max()
                .unwrap_or(largest);
            let mut chosen = Vec::new();
            if self.cover(i, self.full_mask(), k, widest, &mut chosen) {
                let bundles = chosen.iter().map(|&c| self.candidates[c].0.clone()).collect();
                return Some((self.embeddings[i].clone(), BundlingPlan::new(bundles)));
            }
        }
        None
    }

    fn cover(&mut self, emb: usize, uncovered: u64, budget: usize, widest: usize, chosen: &mut Vec<usize>) -> bool {
        self.stats.partitions += 1;
        if uncovered == 0 {
            return true;
        }
        if budget * widest < uncovered.count_ones() as usize {
            return false;
        }
        let lowest = uncovered.trailing_zeros() as usize;
        for idx in 0..self.covers[emb][lowest].len() {
            let c = self.covers[emb][lowest][idx];
            let mask = self.candidates[c].1;
            if mask & !uncovered != 0 {
                continue;
            }
            chosen.push(c);
            if self.cover(emb, uncovered & !mask, budget - 1, widest, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Whether `m` has a drawing whose crossings split into at most `k` bundles.
pub fn decide_bc(m: &MatchingInstance, k: usize, max_edges: usize) -> Result<Decision> {
    if simplify(m).simplified.m() > 16 * k {
        return Ok(Decision {
            witness: None,
            stats: SearchStats::default(),
        });
    }
    check_size(m.m(), max_edges)?;
    let mut solver = Solver::new(m);
    let witness = solver.decide(k);
    Ok(Decision {
        witness,
        stats: solver.stats,
    })
}

pub fn exact_bc(m: &MatchingInstance) -> Result<OracleResult> {
    exact_bc_with(m, OracleOptions::default())
}

/// Smallest number of bundles over all drawings, found on the simplified
/// instance and lifted back with the removed edges.
pub fn exact_bc_with(m: &MatchingInstance, options: OracleOptions) -> Result<OracleResult> {
    let s = simplify(m);
    check_size(s.simplified.m(), options.max_edges)?;
    let mut solver = Solver::new(&s.simplified);
    let limit = options.max_k.unwrap_or(solver.crossings.len());
    for k in 0..=limit {
        if let Some((drawing, plan)) = solver.decide(k) {
            let plan = reinsert(&s, &plan)?;
            let drawing = reinsert_drawing(&s, &drawing)?;
            let geometry = wiring_geometry(&drawing)?;
            return Ok(OracleResult {
                optimum: k,
                drawing: drawing.with_geometry(Some(geometry))?,
                plan,
                stats: solver.stats,
            });
        }
    }
    Err(Error::CapExhausted(limit))
}
