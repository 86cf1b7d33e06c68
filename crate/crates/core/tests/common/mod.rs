//! Instance generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cch::graph::{dijkstra, Coordinates, InputGraph, NodeId, Weight, INFINITY};
use cch::order::{nested_dissection_order, RankOrder};
use cch::preprocess::Cch;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub struct Instance {
    pub name: String,
    pub graph: InputGraph,
    pub coords: Coordinates,
}

/// Adds `{a, b}` with independent random weights; a fifth of the edges are one-way.
fn push_edge(rng: &mut TestRng, arcs: &mut Vec<(NodeId, NodeId, Weight)>, a: NodeId, b: NodeId, one_way: f64) {
    let r: f64 = rng.gen();
    if r < one_way / 2.0 {
        arcs.push((a, b, rng.gen_range(1..=1000)));
    } else if r < one_way {
        arcs.push((b, a, rng.gen_range(1..=1000)));
    } else {
        arcs.push((a, b, rng.gen_range(1..=1000)));
        arcs.push((b, a, rng.gen_range(1..=1000)));
    }
}

/// Road-like random graph: random points, each joined to its nearest earlier
/// point (so the topology is connected), plus edges to a few near neighbors
/// and a handful of long edges.
pub fn random_connected(rng: &mut TestRng, n: usize, one_way: f64) -> Instance {
    let points: Vec<(i32, i32)> = (0..n).map(|_| (rng.gen_range(0..10_000), rng.gen_range(0..10_000))).collect();
    let dist2 = |a: usize, b: usize| {
        let (dx, dy) = ((points[a].0 - points[b].0) as i64, (points[a].1 - points[b].1) as i64);
        dx * dx + dy * dy
    };
    let mut arcs = Vec::new();
    for i in 1..n {
        let j = (0..i).min_by_key(|&j| (dist2(i, j), j)).unwrap();
        push_edge(rng, &mut arcs, i as NodeId, j as NodeId, one_way);
    }
    for i in 0..n {
        let mut near: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        near.sort_by_key(|&j| (dist2(i, j), j));
        let extra = rng.gen_range(0..=2usize);
        for &j in near.iter().take(5).collect::<Vec<_>>().choose_multiple(rng, extra) {
            push_edge(rng, &mut arcs, i as NodeId, *j as NodeId, one_way);
        }
    }
    for _ in 0..n / 40 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            push_edge(rng, &mut arcs, a as NodeId, b as NodeId, one_way);
        }
    }
    let graph = InputGraph::from_arcs(n, arcs).0;
    Instance { name: format!("random-{n}"), graph, coords: Coordinates::new(points) }
}

/// `w x h` grid with random weights on both directions of every edge.
pub fn random_grid(rng: &mut TestRng, w: u32, h: u32, one_way: f64) -> Instance {
    let mut arcs = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                push_edge(rng, &mut arcs, v, v + 1, one_way);
            }
            if y + 1 < h {
                push_edge(rng, &mut arcs, v, v + w, one_way);
            }
        }
    }
    let coords = (0..w * h).map(|v| ((v % w) as i32 * 10, (v / w) as i32 * 10)).collect();
    Instance {
        name: format!("grid-{w}x{h}"),
        graph: InputGraph::from_arcs((w * h) as usize, arcs).0,
        coords: Coordinates::new(coords),
    }
}

/// Two disjoint random graphs side by side.
pub fn two_components(rng: &mut TestRng, n: usize) -> Instance {
    let a = random_connected(rng, n / 2, 0.2);
    let b = random_connected(rng, n - n / 2, 0.2);
    let off = a.graph.num_nodes() as NodeId;
    let arcs = a.graph.arcs().chain(b.graph.arcs().map(|(u, v, w)| (u + off, v + off, w)));
    let graph = InputGraph::from_arcs(n, arcs).0;
    let points = a.coords.points.iter().copied().chain(b.coords.points.iter().map(|&(x, y)| (x + 20_000, y))).collect();
    Instance { name: format!("split-{n}"), graph, coords: Coordinates::new(points) }
}

pub fn random_order(rng: &mut TestRng, n: usize) -> RankOrder {
    let mut v: Vec<NodeId> = (0..n as NodeId).collect();
    v.shuffle(rng);
    RankOrder::from_vertex_at(v).unwrap()
}

pub fn nd_cch(inst: &Instance) -> Cch {
    let nd = nested_dissection_order(&inst.graph, &inst.coords).unwrap();
    Cch::new(&inst.graph, &nd.order).unwrap()
}

pub fn all_pairs(g: &InputGraph) -> Vec<Vec<Weight>> {
    (0..g.num_nodes() as NodeId).map(|s| dijkstra(g, s, None)).collect()
}

/// Elimination game: remove vertices by ascending rank, joining all
/// remaining neighbors pairwise. Returns edges as `(lower rank, higher rank)`.
pub fn naive_elimination(g: &InputGraph, order: &RankOrder) -> BTreeSet<(NodeId, NodeId)> {
    let n = g.num_nodes();
    let mut adj: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
    for (u, v, _) in g.arcs() {
        let (a, b) = (order.rank(u), order.rank(v));
        adj[a as usize].insert(b);
        adj[b as usize].insert(a);
    }
    let mut edges = BTreeSet::new();
    for v in 0..n as NodeId {
        let higher: Vec<NodeId> = adj[v as usize].iter().copied().filter(|&x| x > v).collect();
        for &x in &higher {
            edges.insert((v, x));
        }
        for (i, &a) in higher.iter().enumerate() {
            for &b in &higher[i + 1..] {
                adj[a as usize].insert(b);
                adj[b as usize].insert(a);
            }
        }
    }
    edges
}

/// Length of `path` if it is a walk of `g` from `s` to `t`.
pub fn walk_length(g: &InputGraph, path: &[NodeId], s: NodeId, t: NodeId) -> Option<Weight> {
    if path.first() != Some(&s) || path.last() != Some(&t) {
        return None;
    }
    let mut total: u64 = 0;
    for w in path.windows(2) {
        let l = g.arc_weight(w[0], w[1]);
        if l == INFINITY {
            return None;
        }
        total += l as u64;
    }
    Weight::try_from(total).ok()
}

/// Brute-force k nearest: one-to-all Dijkstra, finite targets sorted by
/// `(distance, id)`.
pub fn knn_oracle(dist: &[Weight], targets: &[NodeId], k: usize) -> Vec<(NodeId, Weight)> {
    let mut t: Vec<NodeId> = targets.to_vec();
    t.sort_unstable();
    t.dedup();
    let mut found: Vec<(Weight, NodeId)> =
        t.into_iter().filter(|&v| dist[v as usize] != INFINITY).map(|v| (dist[v as usize], v)).collect();
    found.sort_unstable();
    found.truncate(k);
    found.into_iter().map(|(d, v)| (v, d)).collect()
}
