//! Input graphs: an undirected topology carrying a directed weight function.
//!
//! Arcs are stored grouped by tail with heads ascending. A pair `{u, v}` is
//! an edge of the topology as soon as one of `(u, v)` or `(v, u)` is stored;
//! a missing direction behaves like an arc of weight [`INFINITY`].

mod dijkstra;
mod dimacs;
mod turns;

use std::ops::Range;

pub use dijkstra::{dijkstra, knn_dijkstra, Dijkstra, DijkstraStats};
pub use dimacs::{
    load_dimacs_co, load_dimacs_gr, parse_dimacs_co, parse_dimacs_gr, write_dimacs_gr, Coordinates, DimacsGraph,
};
pub use turns::{expand_turns, load_turn_table, parse_turn_table, TurnCost, TurnExpansion, TurnTable};

use crate::error::{Error, Result};

pub type NodeId = u32;
pub type ArcId = u32;
pub type Weight = u32;

/// Weight of a missing or unusable arc. Additions saturate here.
pub const INFINITY: Weight = u32::MAX;

/// Marker for "no vertex" / "no arc".
pub const INVALID_ID: u32 = u32::MAX;

/// Saturating path-length addition.
#[inline(always)]
pub fn link(a: Weight, b: Weight) -> Weight {
    a.saturating_add(b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputGraph {
    first_out: Vec<ArcId>,
    head: Vec<NodeId>,
    weight: Vec<Weight>,
}

impl InputGraph {
    /// Builds a graph from arbitrary arcs. Parallel arcs collapse to their
    /// minimum weight, self-loops are dropped and counted.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (NodeId, NodeId, Weight)>) -> (Self, usize) {
        let mut self_loops = 0;
        let mut list: Vec<(NodeId, NodeId, Weight)> = arcs
            .into_iter()
            .filter(|&(u, v, _)| {
                assert!((u as usize) < n && (v as usize) < n, "arc ({u}, {v}) out of range for n = {n}");
                if u == v {
                    self_loops += 1;
                    false
                } else {
                    true
                }
            })
            .collect();
        list.sort_unstable();
        list.dedup_by_key(|&mut (u, v, _)| (u, v));

        let mut first_out = vec![0 as ArcId; n + 1];
        for &(u, _, _) in &list {
            first_out[u as usize + 1] += 1;
        }
        for i in 0..n {
            first_out[i + 1] += first_out[i];
        }
        let head = list.iter().map(|a| a.1).collect();
        let weight = list.iter().map(|a| a.2).collect();
        (InputGraph { first_out, head, weight }, self_loops)
    }

    /// Builds a graph from raw CSR arrays, validating the layout invariants.
    pub fn from_csr(first_out: Vec<ArcId>, head: Vec<NodeId>, weight: Vec<Weight>) -> Result<Self> {
        if first_out.is_empty() || first_out[0] != 0 {
            return Err(Error::consistency("first_out must start with 0"));
        }
        let n = first_out.len() - 1;
        let m = *first_out.last().unwrap() as usize;
        if head.len() != m || weight.len() != m {
            return Err(Error::consistency("arc array lengths disagree with first_out"));
        }
        for u in 0..n {
            if first_out[u] > first_out[u + 1] {
                return Err(Error::consistency("first_out not monotone"));
            }
            let range = &head[first_out[u] as usize..first_out[u + 1] as usize];
            for (i, &v) in range.iter().enumerate() {
                if v as usize >= n || v as usize == u {
                    return Err(Error::consistency(format!("bad arc ({u}, {v})")));
                }
                if i > 0 && range[i - 1] >= v {
                    return Err(Error::consistency(format!("heads of {u} not strictly ascending")));
                }
            }
        }
        Ok(InputGraph { first_out, head, weight })
    }

    pub fn num_nodes(&self) -> usize {
        self.first_out.len() - 1
    }

    pub fn num_arcs(&self) -> usize {
        self.head.len()
    }

    pub fn first_out(&self) -> &[ArcId] {
        &self.first_out
    }

    pub fn head(&self) -> &[NodeId] {
        &self.head
    }

    pub fn weight(&self) -> &[Weight] {
        &self.weight
    }

    #[inline]
    pub fn arc_range(&self, u: NodeId) -> Range<usize> {
        self.first_out[u as usize] as usize..self.first_out[u as usize + 1] as usize
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = (NodeId, Weight)> + '_ {
        let r = self.arc_range(u);
        self.head[r.clone()].iter().copied().zip(self.weight[r].iter().copied())
    }

    /// All arcs as `(tail, head, weight)` in storage order.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId, Weight)> + '_ {
        (0..self.num_nodes() as NodeId).flat_map(move |u| self.neighbors(u).map(move |(v, w)| (u, v, w)))
    }

    pub fn tails(&self) -> Vec<NodeId> {
        let mut tail = Vec::with_capacity(self.num_arcs());
        for u in 0..self.num_nodes() {
            let deg = (self.first_out[u + 1] - self.first_out[u]) as usize;
            tail.extend(std::iter::repeat_n(u as NodeId, deg));
        }
        tail
    }

    pub fn find_arc(&self, u: NodeId, v: NodeId) -> Option<ArcId> {
        let r = self.arc_range(u);
        self.head[r.clone()].binary_search(&v).ok().map(|i| (r.start + i) as ArcId)
    }

    /// `ℓ(u, v)`, or [`INFINITY`] when the arc is not stored.
    pub fn arc_weight(&self, u: NodeId, v: NodeId) -> Weight {
        self.find_arc(u, v).map_or(INFINITY, |a| self.weight[a as usize])
    }

    /// Same topology and arc order, new weights.
    pub fn with_weights(&self, weight: Vec<Weight>) -> Result<Self> {
        if weight.len() != self.num_arcs() {
            return Err(Error::consistency(format!(
                "weight array has {} entries, graph has {} arcs",
                weight.len(),
                self.num_arcs()
            )));
        }
        Ok(InputGraph { first_out: self.first_out.clone(), head: self.head.clone(), weight })
    }

    /// Graph with every arc flipped.
    pub fn reversed(&self) -> Self {
        InputGraph::from_arcs(self.num_nodes(), self.arcs().map(|(u, v, w)| (v, u, w))).0
    }

    /// The undirected topology: `{u, v}` is an edge iff either direction is stored.
    pub fn topology(&self) -> Topology {
        let n = self.num_nodes();
        let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(2 * self.num_arcs());
        for (u, v, _) in self.arcs() {
            edges.push((u, v));
            edges.push((v, u));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut first_out = vec![0u32; n + 1];
        for &(u, _) in &edges {
            first_out[u as usize + 1] += 1;
        }
        for i in 0..n {
            first_out[i + 1] += first_out[i];
        }
        Topology { first_out, neighbors: edges.into_iter().map(|e| e.1).collect() }
    }
}

/// Symmetric, duplicate-free adjacency structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    first_out: Vec<u32>,
    neighbors: Vec<NodeId>,
}

impl Topology {
    pub fn num_nodes(&self) -> usize {
        self.first_out.len() - 1
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.neighbors[self.first_out[u as usize] as usize..self.first_out[u as usize + 1] as usize]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.neighbors(u).len()
    }
}
