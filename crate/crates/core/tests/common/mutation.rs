use bundlecross::layout::{greedy_outerplanar_subset, outerplanar_layout, two_slope_layout};
use bundlecross::model::{validate_bundling, BundledCrossing, BundlingPlan, CombinatorialDrawing};
use bundlecross::oracle::exact_bc;
use bundlecross::simplify::simplify;

use super::{all_crossing, matching, random_matching, rng, three_chords};

#[derive(Debug, Clone, Copy)]
pub enum Mutation {
    Merge,
    Drop,
    Move,
}

/// Valid plans with at least two bundles to corrupt.
pub fn sources() -> Vec<(CombinatorialDrawing, BundlingPlan)> {
    fn push(out: &mut Vec<(CombinatorialDrawing, BundlingPlan)>, d: CombinatorialDrawing, p: BundlingPlan) {
        assert!(validate_bundling(&d, &p).unwrap().is_ok());
        if p.len() >= 2 {
            out.push((d, p));
        }
    }
    let mut out = Vec::new();
    for k in 3..=6 {
        let l = two_slope_layout(&all_crossing(k));
        push(&mut out, l.drawing, l.plan);
    }
    let r = exact_bc(&three_chords()).unwrap();
    push(&mut out, r.drawing, r.plan);
    let r = exact_bc(&matching(8, &[(0, 4), (1, 5), (2, 6), (3, 7)])).unwrap();
    push(&mut out, r.drawing, r.plan);
    let mut g = rng(5);
    while out.len() < 20 {
        let m = simplify(&random_matching(&mut g, 16)).simplified;
        let l = two_slope_layout(&m);
        push(&mut out, l.drawing, l.plan);
        let l = outerplanar_layout(&m, &greedy_outerplanar_subset(m.base())).unwrap();
        push(&mut out, l.drawing, l.plan);
    }
    out
}

/// Applies `kind` to the first pair of bundles where it is a genuine corruption.
pub fn mutate(p: &BundlingPlan, kind: Mutation, skip: usize) -> Option<BundlingPlan> {
    let bs = &p.bundles;
    let mut candidates = Vec::new();
    for i in 0..bs.len() {
        match kind {
            Mutation::Drop => {
                for &c in &bs[i].member_crossings {
                    let mut q = p.clone();
                    q.bundles[i].member_crossings.remove(&c);
                    candidates.push(q);
                }
            }
            Mutation::Merge | Mutation::Move => {
                for j in 0..bs.len() {
                    if i == j {
                        continue;
                    }
                    if let Mutation::Merge = kind {
                        if j < i {
                            continue;
                        }
                        let e1 = bs[i].bundle1.union(&bs[j].bundle1).copied().collect();
                        let e2 = bs[i].bundle2.union(&bs[j].bundle2).copied().collect();
                        let members = bs[i].member_crossings.union(&bs[j].member_crossings).copied().collect();
                        let merged = BundledCrossing { bundle1: e1, bundle2: e2, member_crossings: members };
                        if BundledCrossing::grid(merged.bundle1.clone(), merged.bundle2.clone()).member_crossings
                            == merged.member_crossings
                        {
                            continue;
                        }
                        let mut q = p.clone();
                        q.bundles[i] = merged;
                        q.bundles.remove(j);
                        candidates.push(q);
                    } else {
                        let c = *bs[i].member_crossings.iter().next()?;
                        let mut q = p.clone();
                        q.bundles[i].member_crossings.remove(&c);
                        q.bundles[j].member_crossings.insert(c);
                        candidates.push(q);
                    }
                }
            }
        }
    }
    let len = candidates.len();
    (len > 0).then(|| candidates.swap_remove(skip % len))
}

/// Corrupts valid plans until `count` mutants exist and reports how many the
/// validator rejected, with the first one it missed.
pub fn run(count: usize) -> (usize, usize, Option<String>) {
    let kinds = [Mutation::Merge, Mutation::Drop, Mutation::Move];
    let (mut fixtures, mut rejected, mut missed) = (0, 0, None);
    for (round, (d, p)) in sources().iter().cycle().enumerate() {
        if fixtures == count {
            break;
        }
        let kind = kinds[round % kinds.len()];
        let Some(bad) = mutate(p, kind, round) else { continue };
        fixtures += 1;
        let report = validate_bundling(d, &bad).unwrap();
        if !report.is_ok() && report.violations.iter().all(|v| !v.name().is_empty()) {
            rejected += 1;
        } else if missed.is_none() {
            missed = Some(format!("{kind:?} in round {round}"));
        }
    }
    (fixtures, rejected, missed)
}
