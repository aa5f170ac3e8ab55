mod common;

use std::collections::BTreeSet;

use bundlecross::metro::{
    apply_block_move, bcm_lower_bound, lines_to_chords, metro_oracle, order_lines_greedy, simplify_lines,
    validate_line_orders, MetroInstance,
};
use bundlecross::model::{interleaves, MatchingInstance};
use common::{barbell, five_lines, forced_pair, random_metro, rng};

/// Position of `x` in the rotation at `w`, counted clockwise from `from`.
fn clockwise_from(mi: &MetroInstance, w: usize, from: usize, x: usize) -> usize {
    let rot = mi.rotation(w);
    let len = rot.len();
    let f = rot.iter().position(|&y| y == from).unwrap();
    let i = rot.iter().position(|&y| y == x).unwrap();
    (i + len - f) % len
}

/// Whether two lines cross in every drawing, read off the tree directly.
///
/// A shared stretch `p..q` forces a crossing iff the same line leaves first
/// clockwise at both ends; a single shared vertex forces one iff the four
/// ports interleave; disjoint lines never need to cross.
fn must_cross(mi: &MetroInstance, a: usize, b: usize) -> bool {
    let pa = mi.path(a);
    let pb = mi.path(b);
    let on_b: BTreeSet<usize> = pb.iter().copied().collect();
    let shared: Vec<usize> = pa.iter().copied().filter(|v| on_b.contains(v)).collect();
    let neighbours = |path: &[usize], w: usize| {
        let i = path.iter().position(|&v| v == w).unwrap();
        (path[i - 1], path[i + 1])
    };
    match shared.len() {
        0 => false,
        1 => {
            let w = shared[0];
            let (a0, a1) = neighbours(pa, w);
            let (b0, b1) = neighbours(pb, w);
            let r = |x| clockwise_from(mi, w, a0, x);
            let (lo, hi) = (r(a0).min(r(a1)), r(a0).max(r(a1)));
            let inside = |x| lo < r(x) && r(x) < hi;
            inside(b0) != inside(b1)
        }
        _ => {
            let (p, q) = (shared[0], shared[shared.len() - 1]);
            let leaving = |path: &[usize], w: usize| {
                let (x, y) = neighbours(path, w);
                if on_b.contains(&x) && pa.contains(&x) { y } else { x }
            };
            let first_at = |w: usize, toward: usize| {
                clockwise_from(mi, w, toward, leaving(pa, w)) < clockwise_from(mi, w, toward, leaving(pb, w))
            };
            first_at(p, shared[1]) == first_at(q, shared[shared.len() - 2])
        }
    }
}

fn chord_pairs(mi: &MetroInstance) -> BTreeSet<(usize, usize)> {
    let chords = lines_to_chords(mi).unwrap();
    let k = mi.lines().len();
    (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .filter(|&(a, b)| interleaves(chords.edge(a), chords.edge(b), &chords).unwrap())
        .collect()
}

fn forced_pairs(mi: &MetroInstance) -> BTreeSet<(usize, usize)> {
    let k = mi.lines().len();
    (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .filter(|&(a, b)| must_cross(mi, a, b))
        .collect()
}

#[test]
fn block_move_examples() {
    assert_eq!(apply_block_move(&[1, 2, 3], 1, 1, 3).unwrap(), vec![2, 3, 1]);
    assert_eq!(apply_block_move(&[1, 2, 3, 4], 1, 2, 4).unwrap(), vec![3, 4, 1, 2]);
    assert!(apply_block_move(&[1, 2, 3], 2, 1, 3).is_err());
    assert!(apply_block_move(&[1, 2, 3], 1, 2, 4).is_err());
}

#[test]
fn five_line_chords_keep_interleaving() {
    let mi = five_lines();
    let expected = BTreeSet::from([(0, 2), (1, 2), (2, 3)]);
    assert_eq!(forced_pairs(&mi), expected);
    assert_eq!(chord_pairs(&mi), expected);
}

#[test]
fn chords_agree_with_tree_analysis() {
    let mut r = rng(3);
    for _ in 0..300 {
        let mi = random_metro(&mut r, 14, 6);
        assert_eq!(chord_pairs(&mi), forced_pairs(&mi), "{:?} {:?}", mi.tree_edges(), mi.lines());
    }
}

#[test]
fn forced_pair_costs_one() {
    let mi = forced_pair();
    assert_eq!(metro_oracle(&mi, 16).unwrap().total, 1);
    let greedy = order_lines_greedy(&mi);
    let report = validate_line_orders(&mi, &greedy).unwrap();
    assert!(report.is_ok());
    assert_eq!(report.total, 1);
}

#[test]
fn sixteen_surviving_lines_bound() {
    let lines = |k: usize| (0..k).map(|i| (2 + i, 2 + k + i)).collect::<Vec<_>>();
    let mi = barbell(16, lines(16));
    assert_eq!(simplify_lines(&mi).unwrap().reduced.lines().len(), 16);
    assert_eq!(bcm_lower_bound(&mi), 1);
    assert_eq!(bcm_lower_bound(&barbell(20, lines(20))), 2);
}

#[test]
fn greedy_is_valid_and_oracle_is_sandwiched() {
    let mut r = rng(9);
    for _ in 0..400 {
        let mi = random_metro(&mut r, 10, 4);
        let greedy = order_lines_greedy(&mi);
        let report = validate_line_orders(&mi, &greedy).unwrap();
        assert!(report.is_ok(), "{:?}", report.violations);
        let best = metro_oracle(&mi, 16).unwrap();
        assert!(validate_line_orders(&mi, &best.orders).unwrap().is_ok());
        assert!(bcm_lower_bound(&mi) <= best.total);
        assert!(best.total <= report.total);
    }
}

#[test]
fn lower_bound_never_exceeds_greedy() {
    let mut r = rng(21);
    for _ in 0..200 {
        let mi = random_metro(&mut r, 40, 20);
        let total = validate_line_orders(&mi, &order_lines_greedy(&mi)).unwrap().total;
        assert!(bcm_lower_bound(&mi) <= total);
    }
}

#[test]
fn chords_form_a_matching() {
    let mi = five_lines();
    let chords = lines_to_chords(&mi).unwrap();
    assert_eq!(chords.n(), mi.leaves().len());
    assert!(MatchingInstance::from_matching(chords).is_ok());
}
