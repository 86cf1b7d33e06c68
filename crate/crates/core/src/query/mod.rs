//! Elimination-tree queries on customized search graphs: point-to-point with
//! path unpacking, lazy one-to-many distances, A* with CCH potentials and
//! separator-based nearest neighbors.

mod knn;
mod potential;
mod rphast;

pub use knn::{knn_query, knn_select, PoiIndex};
pub use potential::{AstarResult, CchPotentialAstar};
pub use rphast::LazyRphast;

use crate::customize::{Customized, SearchGraph, SearchGraphs};
use crate::error::{Error, Result};
use crate::graph::{link, ArcId, NodeId, Weight, INFINITY, INVALID_ID};
use crate::preprocess::{Cch, EliminationTree};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Vertices taken off either elimination-tree path.
    pub visited_vertices: u64,
    pub relaxed_arcs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryResult {
    pub distance: Weight,
    /// Vertex (original ID) where the best up-down path turns, if any.
    pub meeting: Option<NodeId>,
}

#[derive(Debug, Clone, Copy)]
struct Recorded {
    source: NodeId,
    target: NodeId,
    meeting: NodeId,
}

/// Reusable point-to-point query workspace. Tentative distances rest at
/// `INFINITY` between queries.
pub struct Query<'a> {
    cch: &'a Cch,
    graphs: &'a SearchGraphs,
    fwd_dist: Vec<Weight>,
    bwd_dist: Vec<Weight>,
    fwd_pred: Vec<ArcId>,
    bwd_pred: Vec<ArcId>,
    prune: bool,
    stats: QueryStats,
    recorded: Option<Recorded>,
}

impl<'a> Query<'a> {
    pub fn new(cch: &'a Cch, customized: &'a Customized) -> Self {
        Self::on_graphs(cch, &customized.graphs)
    }

    pub fn on_graphs(cch: &'a Cch, graphs: &'a SearchGraphs) -> Self {
        let n = cch.num_nodes();
        Query {
            cch,
            graphs,
            fwd_dist: vec![INFINITY; n],
            bwd_dist: vec![INFINITY; n],
            fwd_pred: vec![INVALID_ID; n],
            bwd_pred: vec![INVALID_ID; n],
            prune: true,
            stats: QueryStats::default(),
            recorded: None,
        }
    }

    /// Disabling pruning by the tentative total distance only costs work.
    pub fn set_pruning(&mut self, prune: bool) {
        self.prune = prune;
    }

    /// Counters of the last query.
    pub fn stats(&self) -> QueryStats {
        self.stats
    }

    /// True when every tentative distance is back at rest.
    pub fn is_clean(&self) -> bool {
        self.fwd_dist.iter().chain(&self.bwd_dist).all(|&d| d == INFINITY)
    }

    /// Distance only; a following [`path`](Self::path) call fails.
    pub fn distance(&mut self, s: NodeId, t: NodeId) -> Weight {
        let r = self.query(s, t);
        self.recorded = None;
        r.distance
    }

    /// Shortest `s -> t` distance (original IDs), `INFINITY` if unreachable.
    pub fn query(&mut self, s: NodeId, t: NodeId) -> QueryResult {
        let order = self.cch.order();
        let (rs, rt) = (order.rank(s), order.rank(t));
        let (distance, meeting) = self.run(rs, rt);
        self.recorded = (meeting != INVALID_ID).then_some(Recorded { source: rs, target: rt, meeting });
        QueryResult { distance, meeting: self.recorded.map(|r| order.vertex(r.meeting)) }
    }

    fn run(&mut self, s: NodeId, t: NodeId) -> (Weight, NodeId) {
        let tree: &EliminationTree = self.cch.tree();
        let (fwd, bwd) = (&self.graphs.forward, &self.graphs.backward);
        let mut stats = QueryStats::default();
        let mut mu = INFINITY;
        let mut meeting = INVALID_ID;
        self.fwd_dist[s as usize] = 0;
        self.bwd_dist[t as usize] = 0;

        let mut u = s;
        let mut v = t;
        // climb separately until the paths join
        while u != v {
            if v == INVALID_ID || (u != INVALID_ID && u < v) {
                stats.visited_vertices += 1;
                let d = std::mem::replace(&mut self.fwd_dist[u as usize], INFINITY);
                if d < mu {
                    stats.relaxed_arcs += relax(fwd, u, d, &mut self.fwd_dist, &mut self.fwd_pred);
                }
                u = tree.parent(u).unwrap_or(INVALID_ID);
            } else {
                stats.visited_vertices += 1;
                let d = std::mem::replace(&mut self.bwd_dist[v as usize], INFINITY);
                if d < mu {
                    stats.relaxed_arcs += relax(bwd, v, d, &mut self.bwd_dist, &mut self.bwd_pred);
                }
                v = tree.parent(v).unwrap_or(INVALID_ID);
            }
        }
        // joint ascent on the common part of both paths
        while u != INVALID_ID {
            stats.visited_vertices += 1;
            let df = std::mem::replace(&mut self.fwd_dist[u as usize], INFINITY);
            let db = std::mem::replace(&mut self.bwd_dist[u as usize], INFINITY);
            let total = link(df, db);
            if total < mu {
                mu = total;
                meeting = u;
            }
            let limit = if self.prune { mu } else { INFINITY };
            if df < limit {
                stats.relaxed_arcs += relax(fwd, u, df, &mut self.fwd_dist, &mut self.fwd_pred);
            }
            if db < limit {
                stats.relaxed_arcs += relax(bwd, u, db, &mut self.bwd_dist, &mut self.bwd_pred);
            }
            u = tree.parent(u).unwrap_or(INVALID_ID);
        }
        self.stats = stats;
        (mu, meeting)
    }

    /// Input-graph vertices (original IDs) of the last path query.
    pub fn path(&self) -> Result<Vec<NodeId>> {
        let rec = self.recorded.ok_or_else(|| Error::state("no recorded path; run `query` with a reachable target"))?;
        let (fwd, bwd) = (&self.graphs.forward, &self.graphs.backward);

        let mut up_arcs = Vec::new();
        let mut x = rec.meeting;
        while x != rec.source {
            let a = self.fwd_pred[x as usize];
            up_arcs.push(a);
            x = fwd.tail(a as usize);
        }
        let mut path = vec![rec.source];
        for &a in up_arcs.iter().rev() {
            unpack_arc(self.graphs, Direction::Up, a, &mut path);
        }
        let mut x = rec.meeting;
        while x != rec.target {
            let a = self.bwd_pred[x as usize];
            unpack_arc(self.graphs, Direction::Down, a, &mut path);
            x = bwd.tail(a as usize);
        }
        let order = self.cch.order();
        Ok(path.into_iter().map(|r| order.vertex(r)).collect())
    }
}

fn relax(graph: &SearchGraph, u: NodeId, d: Weight, dist: &mut [Weight], pred: &mut [ArcId]) -> u64 {
    let range = graph.arc_range(u);
    let count = range.len() as u64;
    for a in range {
        let via = link(d, graph.weight(a));
        let h = graph.head(a) as usize;
        if via < dist[h] {
            dist[h] = via;
            pred[h] = a as ArcId;
        }
    }
    count
}

/// `Up` walks a forward-graph arc tail to head, `Down` walks a
/// backward-graph arc head to tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Up,
    Down,
}

/// Appends the input-graph vertices of `arc` after its start vertex.
pub(crate) fn unpack_arc(graphs: &SearchGraphs, dir: Direction, arc: ArcId, out: &mut Vec<NodeId>) {
    let mut stack = vec![(dir, arc)];
    while let Some((dir, a)) = stack.pop() {
        let graph = match dir {
            Direction::Up => &graphs.forward,
            Direction::Down => &graphs.backward,
        };
        match (graph.unpack(a as usize), dir) {
            (None, Direction::Up) => out.push(graph.head(a as usize)),
            (None, Direction::Down) => out.push(graph.tail(a as usize)),
            // down through the lower vertex first, then up
            (Some([other, same]), Direction::Up) => {
                stack.push((Direction::Up, same));
                stack.push((Direction::Down, other));
            }
            (Some([other, same]), Direction::Down) => {
                stack.push((Direction::Up, other));
                stack.push((Direction::Down, same));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::customize::{customize, CustomizeOptions};
    use crate::graph::InputGraph;
    use crate::order::RankOrder;

    fn diamond() -> (InputGraph, Cch) {
        let arcs = [(0, 1, 1), (0, 2, 10), (1, 3, 1), (2, 3, 1)];
        let (g, _) = InputGraph::from_arcs(4, arcs.iter().flat_map(|&(a, b, w)| [(a, b, w), (b, a, w)]));
        let cch = Cch::new(&g, &RankOrder::identity(4)).unwrap();
        (g, cch)
    }

    #[test]
    fn diamond_distances_and_paths() {
        let (g, cch) = diamond();
        for perfect in [false, true] {
            let (c, _) = customize(&cch, &g, CustomizeOptions::new(perfect, 1)).unwrap();
            let mut q = Query::new(&cch, &c);
            assert_eq!(q.distance(2, 2), 0);
            let r = q.query(1, 2);
            assert_eq!(r.distance, 2);
            assert_eq!(q.path().unwrap(), vec![1, 3, 2]);
            if perfect {
                assert_eq!(r.meeting, Some(3));
            }
            assert_eq!(q.query(0, 3).distance, 2);
            assert_eq!(q.path().unwrap(), vec![0, 1, 3]);
            assert_eq!(q.query(0, 2).distance, 3);
            assert_eq!(q.path().unwrap(), vec![0, 1, 3, 2]);
            assert!(q.is_clean());
        }
    }

    #[test]
    fn path_needs_a_recorded_query() {
        let (g, cch) = diamond();
        let (c, _) = customize(&cch, &g, CustomizeOptions::new(true, 1)).unwrap();
        let mut q = Query::new(&cch, &c);
        assert!(matches!(q.path(), Err(Error::State(_))));
        q.distance(0, 3);
        assert!(matches!(q.path(), Err(Error::State(_))));
    }

    #[test]
    fn disconnected_pairs_are_infinite() {
        let (g, _) = InputGraph::from_arcs(4, [(0, 1, 3), (1, 0, 3), (2, 3, 1)]);
        let cch = Cch::new(&g, &RankOrder::identity(4)).unwrap();
        let (c, _) = customize(&cch, &g, CustomizeOptions::new(true, 1)).unwrap();
        let mut q = Query::new(&cch, &c);
        assert_eq!(q.distance(0, 3), INFINITY);
        assert_eq!(q.distance(3, 2), INFINITY);
        assert_eq!(q.distance(2, 3), 1);
        assert!(q.is_clean());
        q.query(0, 2);
        assert!(q.path().is_err());
    }
}
