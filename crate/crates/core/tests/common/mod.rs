#![allow(dead_code)]

pub mod mutation;

use bundlecross::metro::MetroInstance;
use bundlecross::model::{CircularInstance, MatchingInstance};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn matching(n: usize, edges: &[(usize, usize)]) -> MatchingInstance {
    let inst = CircularInstance::with_identity_order(n, edges.to_vec()).unwrap();
    MatchingInstance::from_matching(inst).unwrap()
}

/// `k` chords `(i, i + k)`: every pair interleaves.
pub fn all_crossing(k: usize) -> MatchingInstance {
    let edges: Vec<_> = (0..k).map(|i| (i, i + k)).collect();
    matching(2 * k, &edges)
}

pub fn three_chords() -> MatchingInstance {
    matching(6, &[(0, 3), (1, 4), (2, 5)])
}

/// Random matching on `n` slots with about `fill` of them used.
pub fn random_matching(rng: &mut StdRng, n: usize) -> MatchingInstance {
    let mut slots: Vec<usize> = (0..n).collect();
    slots.shuffle(rng);
    let pairs = rng.gen_range(0..=n / 2);
    let edges: Vec<_> = (0..pairs).map(|i| (slots[2 * i], slots[2 * i + 1])).collect();
    matching(n, &edges)
}

/// Random graph on `n` vertices in a random circular order.
pub fn random_graph(rng: &mut StdRng, n: usize) -> CircularInstance {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let p = rng.gen_range(0.1..0.6);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    CircularInstance::new(n, order, edges).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Every partial matching on `n` circle slots with at most `max_edges` edges.
pub fn all_matchings(n: usize, max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(free: &[usize], left: usize, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        out.push(acc.clone());
        if left == 0 {
            return;
        }
        // pairs added in increasing order of their first slot to avoid repeats
        let floor = acc.last().map_or(0, |e| e.0 + 1);
        for (i, &a) in free.iter().enumerate() {
            if a < floor {
                continue;
            }
            for (j, &b) in free.iter().enumerate().skip(i + 1) {
                let rest: Vec<usize> = free.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &v)| v).collect();
                acc.push((a, b));
                go(&rest, left - 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    let slots: Vec<usize> = (0..n).collect();
    go(&slots, max_edges, &mut Vec::new(), &mut out);
    out
}

/// Smallest rotation of the edge list, so rotated copies collapse together.
pub fn canonical_rotation(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    (0..n.max(1))
        .map(|r| {
            let mut rotated: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = ((a + r) % n, (b + r) % n);
                    (x.min(y), x.max(y))
                })
                .collect();
            rotated.sort_unstable();
            rotated
        })
        .min()
        .unwrap_or_default()
}

/// Two adjacent hubs `0` and `1`, each with `k` leaves.
pub fn barbell(k: usize, lines: Vec<(usize, usize)>) -> MetroInstance {
    let mut edges = vec![(0, 1)];
    edges.extend((0..k).map(|i| (0, 2 + i)));
    edges.extend((0..k).map(|i| (1, 2 + k + i)));
    MetroInstance::new(2 + 2 * k, edges, lines).unwrap()
}

/// Lines `(2, 4)` and `(3, 5)` on a barbell: their terminals interleave and
/// they share the middle edge.
pub fn forced_pair() -> MetroInstance {
    barbell(2, vec![(2, 4), (3, 5)])
}

/// Five lines on a small tree with a trunk `0-1-2` and leaves hanging off it.
pub fn five_lines() -> MetroInstance {
    // trunk 0 - 1 - 2; leaves: 3, 4, 5 on 0; 6, 7 on 1; 8, 9, 10 on 2; 11, 12 on 1
    let edges = vec![
        (0, 1),
        (1, 2),
        (0, 3),
        (0, 4),
        (0, 5),
        (1, 6),
        (1, 7),
        (2, 8),
        (2, 9),
        (2, 10),
        (1, 11),
        (1, 12),
    ];
    let lines = vec![(3, 9), (4, 8), (5, 6), (7, 10), (11, 12)];
    MetroInstance::new(13, edges, lines).unwrap()
}

/// Random tree with lines between random leaf pairs.
pub fn random_metro(rng: &mut StdRng, max_n: usize, max_lines: usize) -> MetroInstance {
    let n = rng.gen_range(2..=max_n);
    let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    let probe = MetroInstance::new(n, edges.clone(), vec![]).unwrap();
    let mut leaves = probe.leaves().to_vec();
    leaves.shuffle(rng);
    let k = rng.gen_range(0..=(leaves.len() / 2).min(max_lines));
    let lines = (0..k).map(|i| (leaves[2 * i], leaves[2 * i + 1])).collect();
    MetroInstance::new(n, edges, lines).unwrap()
}
