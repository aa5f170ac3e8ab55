//! Block crossings of metro lines on a plane tree.
//!
//! Line orders on an edge are read left to right walking along it; the
//! listing order of a vertex's neighbors is its clockwise rotation.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CircularInstance, MatchingInstance};
use crate::simplify::simplify;

/// Swaps the blocks `i..=j` and `j+1..=k` (1-based, inclusive).
pub fn apply_block_move<T: Clone>(order: &[T], i: usize, j: usize, k: usize) -> Result<Vec<T>> {
    if !(1 <= i && i <= j && j < k && k <= order.len()) {
        return Err(Error::InvalidBlockMove { i, j, k, len: order.len() });
    }
    let mut out = order.to_vec();
    out[i - 1..k].rotate_left(j + 1 - i);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetroInstance {
    n: usize,
    tree_edges: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
    lines: Vec<(usize, usize)>,
    edge_index: BTreeMap<(usize, usize), usize>,
    /// Leaves in clockwise order.
    leaves: Vec<usize>,
    leaf_pos: Vec<Option<usize>>,
    /// Vertex path of each line, from its first terminal.
    paths: Vec<Vec<usize>>,
    /// Lines using each tree edge, ascending.
    edge_lines: Vec<Vec<usize>>,
}

impl MetroInstance {
    pub fn new(n: usize, tree_edges: Vec<(usize, usize)>, lines: Vec<(usize, usize)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidMetro(msg));
        if n == 0 {
            return bad("tree has no vertices".into());
        }
        if tree_edges.len() != n - 1 {
            return bad(format!("a tree on {n} vertices has {} edges, got {}", n - 1, tree_edges.len()));
        }
        let mut rotation = vec![Vec::new(); n];
        let mut edge_index = BTreeMap::new();
        for (i, &(u, v)) in tree_edges.iter().enumerate() {
            if u >= n || v >= n {
                return bad(format!("tree edge ({u}, {v}) has a vertex out of range"));
            }
            if u == v || edge_index.contains_key(&(u, v)) {
                return bad(format!("tree edge ({u}, {v}) is a loop or repeated"));
            }
            edge_index.insert((u, v), i);
            edge_index.insert((v, u), i);
            rotation[u].push(v);
            rotation[v].push(u);
        }
        let parent = bfs_parents(&rotation, 0);
        if parent.iter().any(Option::is_none) {
            return bad("tree is not connected".into());
        }
        let is_leaf = |v: usize| rotation[v].len() == 1;
        let mut used = BTreeSet::new();
        for &(a, b) in &lines {
            for t in [a, b] {
                if t >= n || !is_leaf(t) {
                    return bad(format!("terminal {t} is not a leaf"));
                }
                if !used.insert(t) {
                    return bad(format!("leaf {t} terminates two lines"));
                }
            }
        }
        let leaves = clockwise_leaves(&rotation);
        let mut leaf_pos = vec![None; n];
        for (p, &l) in leaves.iter().enumerate() {
            leaf_pos[l] = Some(p);
        }
        let mut edge_lines = vec![Vec::new(); tree_edges.len()];
        let paths: Vec<Vec<usize>> = lines
            .iter()
            .map(|&(a, b)| {
                let parents = bfs_parents(&rotation, a);
                let mut path = vec![b];
                while let Some(p) = parents[*path.last().unwrap()].filter(|_| *path.last().unwrap() != a) {
                    path.push(p);
                }
                path.reverse();
                path
            })
            .collect();
        for (l, path) in paths.iter().enumerate() {
            for w in path.windows(2) {
                edge_lines[edge_index[&(w[0], w[1])]].push(l);
            }
        }
        Ok(Self {
            n,
            tree_edges,
            rotation,
            lines,
            edge_index,
            leaves,
            leaf_pos,
            paths,
            edge_lines,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn lines(&self) -> &[(usize, usize)] {
        &self.lines
    }

    /// Neighbors of `v` in clockwise order.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn path(&self, line: usize) -> &[usize] {
        &self.paths[line]
    }

    pub fn lines_on(&self, edge: usize) -> &[usize] {
        &self.edge_lines[edge]
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u, v)).copied()
    }

    /// The same tree carrying only the given lines.
    pub fn with_lines(&self, lines: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(self.n, self.tree_edges.clone(), lines)
    }

    /// Terminals of `line` as positions in the clockwise leaf order.
    fn terminal_positions(&self, line: usize) -> (usize, usize) {
        let (a, b) = self.lines[line];
        (self.leaf_pos[a].unwrap(), self.leaf_pos[b].unwrap())
    }

    /// Index in `rotation(w)` of the port through which `line` leaves `w` towards `x`.
    fn port(&self, w: usize, x: usize) -> usize {
        self.rotation[w].iter().position(|&y| y == x).expect("neighbor")
    }

    /// Ports of `w` used by `line` (one at a terminal, two elsewhere).
    fn ports_of(&self, line: usize, w: usize) -> Vec<usize> {
        let path = &self.paths[line];
        let Some(i) = path.iter().position(|&v| v == w) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        if i > 0 {
            out.push(self.port(w, path[i - 1]));
        }
        if i + 1 < path.len() {
            out.push(self.port(w, path[i + 1]));
        }
        out
    }

    /// The terminal of `line` reached by walking from `w` towards `x`.
    fn terminal_beyond(&self, line: usize, w: usize, x: usize) -> usize {
        let path = &self.paths[line];
        let i = path.iter().position(|&v| v == w).expect("line passes w");
        if i + 1 < path.len() && path[i + 1] == x {
            *path.last().unwrap()
        } else {
            path[0]
        }
    }
}

fn bfs_parents(rotation: &[Vec<usize>], root: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; rotation.len()];
    parent[root] = Some(root);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &rotation[v] {
            if parent[w].is_none() {
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    parent
}

/// Next dart of the boundary walk: leave `c` by the neighbor after `p`.
fn next_dart(rotation: &[Vec<usize>], (p, c): (usize, usize)) -> (usize, usize) {
    let r = &rotation[c];
    let i = r.iter().position(|&v| v == p).expect("dart");
    (c, r[(i + 1) % r.len()])
}

/// Leaves met by walking around the tree, starting at the smallest leaf.
fn clockwise_leaves(rotation: &[Vec<usize>]) -> Vec<usize> {
    let Some(start) = (0..rotation.len()).find(|&v| rotation[v].len() == 1) else {
        return Vec::new();
    };
    let mut out = vec![start];
    let mut dart = (start, rotation[start][0]);
    loop {
        let c = dart.1;
        if rotation[c].len() == 1 {
            if c == start {
                break;
            }
            out.push(c);
        }
        dart = next_dart(rotation, dart);
    }
    out
}

/// First leaf met when walking from `w` into the branch behind `x`.
fn first_leaf(rotation: &[Vec<usize>], w: usize, x: usize) -> usize {
    let mut dart = (w, x);
    while rotation[dart.1].len() != 1 {
        dart = next_dart(rotation, dart);
    }
    dart.1
}

/// Orders of the lines on one tree edge, walking from `u` to `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeOrders {
    pub u: usize,
    pub v: usize,
    pub orders: Vec<Vec<usize>>,
    /// 1-based `(i, j, k)`; move `s` turns `orders[s]` into `orders[s + 1]`.
    pub moves: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LineOrders {
    pub edges: Vec<EdgeOrders>,
}

impl LineOrders {
    /// Total number of block crossings.
    pub fn total(&self) -> usize {
        self.edges.iter().map(|e| e.moves.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetroViolation {
    MissingOrders { edge: usize },
    OrdersInconsistent { edge: usize, step: usize },
    BadMove { edge: usize, step: usize },
    VertexCrossing { vertex: usize, lines: (usize, usize) },
}

impl MetroViolation {
    pub fn name(&self) -> &'static str {
        match self {
            MetroViolation::MissingOrders { .. } => "missing orders",
            MetroViolation::OrdersInconsistent { .. } => "orders inconsistent",
            MetroViolation::BadMove { .. } => "bad move",
            MetroViolation::VertexCrossing { .. } => "vertex crossing",
        }
    }
}

impl fmt::Display for MetroViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetroViolation::MissingOrders { edge } => write!(f, "missing orders: edge {edge}"),
            MetroViolation::OrdersInconsistent { edge, step } => {
                write!(f, "orders inconsistent: edge {edge}, order {step}")
            }
            MetroViolation::BadMove { edge, step } => write!(f, "bad move: edge {edge}, move {step}"),
            MetroViolation::VertexCrossing { vertex, lines } => {
                write!(f, "vertex crossing: lines {} and {} at vertex {vertex}", lines.0, lines.1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetroReport {
    pub violations: Vec<MetroViolation>,
    /// Block crossings over all edges.
    pub total: usize,
}

impl MetroReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Port orders around `w`: for each rotation index, the lines left to right
/// walking away from `w`.
type Ports = Vec<Option<Vec<usize>>>;

/// Pairs of lines sharing a port whose routes cross inside the vertex.
fn vertex_crossings(ports: &Ports) -> Vec<(usize, usize)> {
    let mut at: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    let mut slot = 0;
    for (i, port) in ports.iter().enumerate() {
        for &l in port.iter().flatten() {
            at.entry(l).or_default().push((slot, i));
            slot += 1;
        }
    }
    let through: Vec<(usize, &Vec<(usize, usize)>)> =
        at.iter().filter(|(_, occ)| occ.len() == 2).map(|(&l, occ)| (l, occ)).collect();
    let mut out = Vec::new();
    for (x, &(a, occ_a)) in through.iter().enumerate() {
        for &(b, occ_b) in &through[x + 1..] {
            let shared = occ_a.iter().any(|p| occ_b.iter().any(|q| p.1 == q.1));
            let (a0, a1) = (occ_a[0].0, occ_a[1].0);
            let inside = |s: usize| a0 < s && s < a1;
            if shared && inside(occ_b[0].0) != inside(occ_b[1].0) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Checks moves, end orders and vertex consistency.
pub fn validate_line_orders(mi: &MetroInstance, lo: &LineOrders) -> Result<MetroReport> {
    let mut by_edge: Vec<Option<&EdgeOrders>> = vec![None; mi.tree_edges.len()];
    for eo in &lo.edges {
        let e = mi.edge_between(eo.u, eo.v).ok_or_else(|| Error::UnknownId {
            kind: "edge",
            id: format!("({}, {})", eo.u, eo.v),
        })?;
        if let Some(l) = eo.orders.iter().flatten().find(|&&l| l >= mi.lines.len()) {
            return Err(Error::UnknownId { kind: "line", id: l.to_string() });
        }
        if by_edge[e].replace(eo).is_some() {
            return Err(Error::InvalidMetro(format!("edge ({}, {}) listed twice", eo.u, eo.v)));
        }
    }
    let mut violations = Vec::new();
    let mut sound = vec![true; by_edge.len()];
    for (e, entry) in by_edge.iter().enumerate() {
        let expected = &mi.edge_lines[e];
        let Some(eo) = entry else {
            if !expected.is_empty() {
                violations.push(MetroViolation::MissingOrders { edge: e });
                sound[e] = false;
            }
            continue;
        };
        let before = violations.len();
        if eo.orders.len() != eo.moves.len() + 1 {
            violations.push(MetroViolation::OrdersInconsistent { edge: e, step: eo.orders.len() });
        }
        for (s, order) in eo.orders.iter().enumerate() {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != *expected {
                violations.push(MetroViolation::OrdersInconsistent { edge: e, step: s });
            }
        }
        for (s, &[i, j, k]) in eo.moves.iter().enumerate() {
            let (Some(from), Some(to)) = (eo.orders.get(s), eo.orders.get(s + 1)) else {
                break;
            };
            match apply_block_move(from, i, j, k) {
                Err(_) => violations.push(MetroViolation::BadMove { edge: e, step: s }),
                Ok(next) if next != *to => {
                    violations.push(MetroViolation::OrdersInconsistent { edge: e, step: s + 1 })
                }
                Ok(_) => {}
            }
        }
        sound[e] = violations.len() == before;
    }
    for w in 0..mi.n {
        let mut ports: Ports = Vec::new();
        let mut complete = true;
        for &x in &mi.rotation[w] {
            let e = mi.edge_index[&(w, x)];
            complete &= sound[e];
            ports.push(by_edge[e].map(|eo| end_order(eo, w)));
        }
        if complete {
            violations.extend(
                vertex_crossings(&ports)
                    .into_iter()
                    .map(|lines| MetroViolation::VertexCrossing { vertex: w, lines }),
            );
        }
    }
    Ok(MetroReport { violations, total: lo.total() })
}

/// Lines of `eo` at its end `w`, left to right walking away from `w`.
fn end_order(eo: &EdgeOrders, w: usize) -> Vec<usize> {
    if eo.u == w {
        eo.orders.first().cloned().unwrap_or_default()
    } else {
        eo.orders.last().cloned().unwrap_or_default().into_iter().rev().collect()
    }
}

/// Lines removed by [`simplify_lines`], each with the kept partner it runs beside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSimplification {
    pub reduced: MetroInstance,
    /// `kept[i]` is the original index of reduced line `i`.
    pub kept: Vec<usize>,
    /// `(removed, partner)` in removal order.
    pub log: Vec<(usize, usize)>,
}

/// Repeatedly drops the higher-indexed line of the first pair whose terminals
/// are pairwise adjacent among the remaining terminals and do not interleave.
pub fn simplify_lines(mi: &MetroInstance) -> Result<LineSimplification> {
    let count = mi.lines.len();
    let mut alive = vec![true; count];
    let mut log = Vec::new();
    loop {
        let mut owner: Vec<usize> = Vec::new();
        for &leaf in &mi.leaves {
            if let Some(l) = (0..count).find(|&l| alive[l] && (mi.lines[l].0 == leaf || mi.lines[l].1 == leaf)) {
                owner.push(l);
            }
        }
        let len = owner.len();
        let mut rank = vec![Vec::new(); count];
        for (r, &l) in owner.iter().enumerate() {
            rank[l].push(r);
        }
        let adjacent = |i: usize, j: usize| (i + 1) % len == j || (j + 1) % len == i;
        let pair = (0..count).filter(|&a| alive[a]).find_map(|a| {
            (a + 1..count).filter(|&b| alive[b]).find_map(|b| {
                let (p, q) = (rank[a][0], rank[a][1]);
                let (r, s) = (rank[b][0], rank[b][1]);
                let crossing = (p < r && r < q) != (p < s && s < q);
                let paired = (adjacent(p, r) && adjacent(q, s)) || (adjacent(p, s) && adjacent(q, r));
                (paired && !crossing).then_some((a, b))
            })
        });
        match pair {
            Some((a, b)) => {
                alive[b] = false;
                log.push((b, a));
            }
            None => break,
        }
    }
    let kept: Vec<usize> = (0..count).filter(|&l| alive[l]).collect();
    let reduced = mi.with_lines(kept.iter().map(|&l| mi.lines[l]).collect())?;
    Ok(LineSimplification { reduced, kept, log })
}

/// Leaves become circle vertices in clockwise order and lines become chords.
pub fn lines_to_chords(mi: &MetroInstance) -> Result<CircularInstance> {
    let edges = (0..mi.lines.len()).map(|l| mi.terminal_positions(l)).collect();
    CircularInstance::with_identity_order(mi.leaves.len(), edges)
}

/// `ceil(l'/16)`, where `l'` counts the chords left after full circular
/// simplification (parallel and uncrossed chords removed).
///
/// Two lines sharing no edge cross inside a vertex for free, so only lines
/// that interleave nothing they are edge-disjoint from are counted.
pub fn bcm_lower_bound(mi: &MetroInstance) -> usize {
    let chords = lines_to_chords(mi).expect("terminals are distinct leaves");
    let matching = MatchingInstance::from_matching(chords).expect("one line per leaf");
    let count = mi.lines.len();
    let shares_edge = |a: usize, b: usize| mi.edge_lines.iter().any(|on| on.contains(&a) && on.contains(&b));
    let counted: Vec<usize> = (0..count)
        .filter(|&a| (0..count).all(|b| !matching.crosses(a, b) || shares_edge(a, b)))
        .collect();
    let edges = counted.iter().map(|&l| matching.span(l)).collect();
    let sub = CircularInstance::with_identity_order(mi.leaves.len(), edges).expect("subset of a matching");
    let sub = MatchingInstance::from_matching(sub).expect("subset of a matching");
    crate::bounds::lower_bound_fixed(simplify(&sub).simplified.m())
}

/// Moves turning `from` into `to`: repeatedly bring the first misplaced line
/// forward together with the longest run that follows it in `to`.
fn block_sort(from: &[usize], to: &[usize]) -> (Vec<Vec<usize>>, Vec<[usize; 3]>) {
    let mut current = from.to_vec();
    let mut orders = vec![current.clone()];
    let mut moves = Vec::new();
    while let Some(p) = (0..current.len()).find(|&i| current[i] != to[i]) {
        let q = current.iter().position(|&x| x == to[p]).expect("same lines");
        let mut r = q;
        while r + 1 < current.len() && p + (r + 1 - q) < to.len() && current[r + 1] == to[p + (r + 1 - q)] {
            r += 1;
        }
        let mv = [p + 1, q, r + 1];
        current = apply_block_move(&current, mv[0], mv[1], mv[2]).expect("p < q <= r");
        orders.push(current.clone());
        moves.push(mv);
    }
    (orders, moves)
}

/// Builds per-edge orders from port orders at both ends of every edge.
fn orders_from_ports(
    mi: &MetroInstance,
    ports: &[BTreeMap<usize, Vec<usize>>],
    mut edge_moves: impl FnMut(&[usize], &[usize]) -> (Vec<Vec<usize>>, Vec<[usize; 3]>),
) -> LineOrders {
    let edges = mi
        .tree_edges
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            let start = ports[u].get(&e).cloned().unwrap_or_default();
            let end: Vec<usize> = ports[v].get(&e).cloned().unwrap_or_default().into_iter().rev().collect();
            let (orders, moves) = edge_moves(&start, &end);
            EdgeOrders { u, v, orders, moves }
        })
        .collect();
    LineOrders { edges }
}

/// Validator-correct line orders without an approximation guarantee.
///
/// Around each vertex, lines in a port are sorted so that no two cross
/// inside the vertex; every edge then repairs its two end orders with block
/// moves.
pub fn order_lines_greedy(mi: &MetroInstance) -> LineOrders {
    let parents = bfs_parents(&mi.rotation, 0);
    let count = mi.leaves.len();
    let mut ports: Vec<BTreeMap<usize, Vec<usize>>> = vec![BTreeMap::new(); mi.n];
    for w in 0..mi.n {
        let rot = &mi.rotation[w];
        let deg = rot.len();
        let parent_port = (w != 0).then(|| mi.port(w, parents[w].unwrap()));
        // position of a line's terminal within the branch behind port `i`
        let rel = |l: usize, i: usize| {
            let t = mi.terminal_beyond(l, w, rot[i]);
            let first = mi.leaf_pos[first_leaf(&mi.rotation, w, rot[i])].unwrap();
            (mi.leaf_pos[t].unwrap() + count - first) % count
        };
        for (i, &x) in rot.iter().enumerate() {
            let e = mi.edge_index[&(w, x)];
            let mut keyed: Vec<((usize, i64), usize)> = mi.edge_lines[e]
                .iter()
                .map(|&l| {
                    let other = mi.ports_of(l, w).into_iter().find(|&j| j != i);
                    let Some(j) = other else {
                        return ((0, 0), l);
                    };
                    let dist = (j + deg - i) % deg;
                    // lines between the same two ports nest: sort by the terminal
                    // behind the designated port, mirrored in the other one
                    let designated = if Some(i) == parent_port {
                        j
                    } else if Some(j) == parent_port {
                        i
                    } else {
                        i.min(j)
                    };
                    let k = rel(l, designated) as i64;
                    (((deg - dist), if designated == i { k } else { -k }), l)
                })
                .collect();
            keyed.sort();
            ports[w].insert(e, keyed.into_iter().map(|(_, l)| l).collect());
        }
    }
    orders_from_ports(mi, &ports, block_sort)
}

pub const METRO_ORACLE_MAX_LINES: usize = 4;

/// Orders visited by a shortest move sequence, and the moves.
type MovePath = (Vec<Vec<usize>>, Vec<[usize; 3]>);
type MoveMemo = HashMap<(Vec<usize>, Vec<usize>), MovePath>;

/// Fewest block moves between two orders of the same lines, with the moves.
fn move_path(from: &[usize], to: &[usize], memo: &mut MoveMemo) -> MovePath {
    let key = (from.to_vec(), to.to_vec());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let len = from.len();
    let mut prev = HashMap::from([(from.to_vec(), None)]);
    let mut queue = VecDeque::from([from.to_vec()]);
    while let Some(cur) = queue.pop_front() {
        if cur == to {
            break;
        }
        for i in 1..=len {
            for j in i..=len {
                for k in j + 1..=len {
                    let next = apply_block_move(&cur, i, j, k).expect("indices in range");
                    if !prev.contains_key(&next) {
                        prev.insert(next.clone(), Some((cur.clone(), [i, j, k])));
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    let mut orders = vec![to.to_vec()];
    let mut moves = Vec::new();
    let mut at = to.to_vec();
    while let Some(Some((p, mv))) = prev.get(&at) {
        moves.push(*mv);
        orders.push(p.clone());
        at = p.clone();
    }
    orders.reverse();
    moves.reverse();
    memo.insert(key, (orders.clone(), moves.clone()));
    (orders, moves)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetroSolution {
    pub total: usize,
    pub orders: LineOrders,
}

/// Minimum total block crossings, by dynamic programming over the rooted
/// tree on the line orders at both ends of every edge.
///
/// Errors if more than [`METRO_ORACLE_MAX_LINES`] lines are given or the
/// optimum exceeds `cap`.
pub fn metro_oracle(mi: &MetroInstance, cap: usize) -> Result<MetroSolution> {
    if mi.lines.len() > METRO_ORACLE_MAX_LINES {
        return Err(Error::TooLargeForOracle {
            edges: mi.lines.len(),
            cap: METRO_ORACLE_MAX_LINES,
        });
    }
    let mut search = MetroSearch {
        mi,
        memo: HashMap::new(),
        parents: bfs_parents(&mi.rotation, 0),
        configs: vec![Vec::new(); mi.n],
        best: vec![BTreeMap::new(); mi.n],
    };
    for w in 0..mi.n {
        search.configs[w] = search.vertex_configs(w);
    }
    search.solve(0);
    let (total, root_config) = search.best[0][&Vec::new()];
    if total > cap {
        return Err(Error::CapExhausted(cap));
    }
    let mut ports = vec![BTreeMap::new(); mi.n];
    search.rebuild(0, root_config, &mut ports);
    let mut memo = std::mem::take(&mut search.memo);
    let orders = orders_from_ports(mi, &ports, |a, b| move_path(a, b, &mut memo));
    debug_assert_eq!(orders.total(), total);
    Ok(MetroSolution { total, orders })
}

struct MetroSearch<'a> {
    mi: &'a MetroInstance,
    memo: MoveMemo,
    parents: Vec<Option<usize>>,
    /// Vertex-consistent port orders at each vertex, keyed by edge.
    configs: Vec<Vec<BTreeMap<usize, Vec<usize>>>>,
    /// Per vertex: parent-port order -> (subtree cost, index of best config).
    best: Vec<BTreeMap<Vec<usize>, (usize, usize)>>,
}

impl MetroSearch<'_> {
    fn vertex_configs(&self, w: usize) -> Vec<BTreeMap<usize, Vec<usize>>> {
        let rot = &self.mi.rotation[w];
        let mut configs: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for &x in rot {
            let lines = &self.mi.edge_lines[self.mi.edge_index[&(w, x)]];
            let perms = permutations(lines);
            configs = configs
                .into_iter()
                .flat_map(|c| {
                    perms.iter().map(move |p| {
                        let mut c = c.clone();
                        c.push(p.clone());
                        c
                    })
                })
                .collect();
        }
        configs
            .into_iter()
            .filter(|c| {
                let ports: Ports = c.iter().cloned().map(Some).collect();
                vertex_crossings(&ports).is_empty()
            })
            .map(|c| {
                rot.iter()
                    .map(|&x| self.mi.edge_index[&(w, x)])
                    .zip(c)
                    .collect()
            })
            .collect()
    }

    fn children(&self, w: usize) -> Vec<usize> {
        self.mi.rotation[w]
            .iter()
            .copied()
            .filter(|&x| self.parents[x] == Some(w) && x != 0)
            .collect()
    }

    fn distance(&mut self, from: &[usize], to: &[usize]) -> usize {
        move_path(from, to, &mut self.memo).1.len()
    }

    /// Cheapest way to continue into child `c` when the parent's port towards it reads `q`.
    fn child_cost(&mut self, c: usize, q: &[usize]) -> (usize, Vec<usize>) {
        let options: Vec<(Vec<usize>, usize)> = self.best[c].iter().map(|(r, &(cost, _))| (r.clone(), cost)).collect();
        options
            .into_iter()
            .map(|(r, cost)| {
                let end: Vec<usize> = r.iter().rev().copied().collect();
                (cost + self.distance(q, &end), r)
            })
            .min()
            .expect("every vertex has a consistent configuration")
    }

    fn solve(&mut self, w: usize) {
        let children = self.children(w);
        for &c in &children {
            self.solve(c);
        }
        let parent_edge = (w != 0).then(|| self.mi.edge_index[&(w, self.parents[w].unwrap())]);
        let mut best: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
        for idx in 0..self.configs[w].len() {
            let config = self.configs[w][idx].clone();
            let mut cost = 0;
            for &c in &children {
                let e = self.mi.edge_index[&(w, c)];
                cost += self.child_cost(c, &config[&e]).0;
            }
            let key = parent_edge.map(|e| config[&e].clone()).unwrap_or_default();
            let slot = best.entry(key).or_insert((usize::MAX, 0));
            if cost < slot.0 {
                *slot = (cost, idx);
            }
        }
        self.best[w] = best;
    }

    fn rebuild(&mut self, w: usize, idx: usize, ports: &mut [BTreeMap<usize, Vec<usize>>]) {
        let config = self.configs[w][idx].clone();
        for c in self.children(w) {
            let e = self.mi.edge_index[&(w, c)];
            let (_, r) = self.child_cost(c, &config[&e]);
            let child_idx = self.best[c][&r].1;
            self.rebuild(c, child_idx, ports);
        }
        ports[w] = config;
    }
}
