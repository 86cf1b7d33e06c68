use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::ControlFlow;

use super::{link, InputGraph, NodeId, Weight, INFINITY};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DijkstraStats {
    pub settled: usize,
    pub relaxed: usize,
}

/// Plain Dijkstra with a reusable workspace. Only vertices touched by the
/// previous run are reset, so repeated runs cost proportional to the search
/// space and not to `n`.
#[derive(Debug)]
pub struct Dijkstra<'g> {
    graph: &'g InputGraph,
    dist: Vec<Weight>,
    settled: Vec<bool>,
    touched: Vec<NodeId>,
    heap: BinaryHeap<Reverse<(Weight, NodeId)>>,
    stats: DijkstraStats,
}

impl<'g> Dijkstra<'g> {
    pub fn new(graph: &'g InputGraph) -> Self {
        let n = graph.num_nodes();
        Dijkstra {
            graph,
            dist: vec![INFINITY; n],
            settled: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
            stats: DijkstraStats::default(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = INFINITY;
            self.settled[v as usize] = false;
        }
        self.touched.clear();
        self.heap.clear();
        self.stats = DijkstraStats::default();
    }

    /// Runs from `s`, calling `on_settle(v, dist)` for every vertex in
    /// settle order. Returning `Break` stops the search.
    pub fn run(&mut self, s: NodeId, mut on_settle: impl FnMut(NodeId, Weight) -> ControlFlow<()>) {
        self.reset();
        self.dist[s as usize] = 0;
        self.touched.push(s);
        self.heap.push(Reverse((0, s)));
        while let Some(Reverse((d, u))) = self.heap.pop() {
            if self.settled[u as usize] || d > self.dist[u as usize] {
                continue;
            }
            self.settled[u as usize] = true;
            self.stats.settled += 1;
            if on_settle(u, d).is_break() {
                return;
            }
            for (v, w) in self.graph.neighbors(u) {
                self.stats.relaxed += 1;
                let nd = link(d, w);
                if nd < self.dist[v as usize] {
                    if self.dist[v as usize] == INFINITY {
                        self.touched.push(v);
                    }
                    self.dist[v as usize] = nd;
                    self.heap.push(Reverse((nd, v)));
                }
            }
        }
    }

    /// Tentative distance of `v` after the last run; exact for settled vertices.
    pub fn distance(&self, v: NodeId) -> Weight {
        self.dist[v as usize]
    }

    pub fn is_settled(&self, v: NodeId) -> bool {
        self.settled[v as usize]
    }

    pub fn stats(&self) -> DijkstraStats {
        self.stats
    }
}

/// Distances from `s`. With `targets`, the search stops once all of them are
/// settled; entries for the targets are exact, other entries are upper bounds.
pub fn dijkstra(graph: &InputGraph, s: NodeId, targets: Option<&[NodeId]>) -> Vec<Weight> {
    let mut search = Dijkstra::new(graph);
    match targets {
        None => search.run(s, |_, _| ControlFlow::Continue(())),
        Some(targets) => {
            let mut is_target = vec![false; graph.num_nodes()];
            let mut remaining = 0usize;
            for &t in targets {
                if !is_target[t as usize] {
                    is_target[t as usize] = true;
                    remaining += 1;
                }
            }
            if remaining > 0 {
                search.run(s, |v, _| {
                    if is_target[v as usize] {
                        remaining -= 1;
                        if remaining == 0 {
                            return ControlFlow::Break(());
                        }
                    }
                    ControlFlow::Continue(())
                });
            }
        }
    }
    search.dist
}

/// The `k` targets closest to `s`, ascending by `(distance, id)`.
/// Unreachable targets are never reported.
pub fn knn_dijkstra(graph: &InputGraph, s: NodeId, k: usize, targets: &[NodeId]) -> Vec<(NodeId, Weight)> {
    if k == 0 || targets.is_empty() {
        return Vec::new();
    }
    let mut is_target = vec![false; graph.num_nodes()];
    for &t in targets {
        is_target[t as usize] = true;
    }
    let mut found: Vec<(NodeId, Weight)> = Vec::new();
    let mut search = Dijkstra::new(graph);
    search.run(s, |v, d| {
        // keep settling while distances tie with the k-th so the ID tie-break is exact
        if found.len() >= k && d > found[k - 1].1 {
            return ControlFlow::Break(());
        }
        if is_target[v as usize] {
            found.push((v, d));
        }
        ControlFlow::Continue(())
    });
    found.sort_unstable_by_key(|&(v, d)| (d, v));
    found.truncate(k);
    found
}
