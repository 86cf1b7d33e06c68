//! A* on an arbitrary search graph, guided by exact distances in a base
//! metric that bounds the search weights from below.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::LazyRphast;
use crate::customize::Customized;
use crate::error::{Error, Result};
use crate::graph::{link, InputGraph, NodeId, Weight, INFINITY};
use crate::preprocess::Cch;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AstarResult {
    pub distance: Weight,
    pub settled: usize,
}

pub struct CchPotentialAstar<'a> {
    potentials: LazyRphast<'a>,
    search: &'a InputGraph,
    to_base: Vec<NodeId>,
    dist: Vec<Weight>,
    touched: Vec<NodeId>,
    settled: Vec<bool>,
    heap: BinaryHeap<Reverse<(Weight, NodeId)>>,
}

impl<'a> CchPotentialAstar<'a> {
    /// `to_base[v]` is the base-graph vertex whose distance to the target's
    /// base vertex bounds `v`'s remaining distance; `None` means the search
    /// graph shares the base vertex IDs.
    pub fn new(cch: &'a Cch, base: &'a Customized, search: &'a InputGraph, to_base: Option<Vec<NodeId>>) -> Result<Self> {
        let n = search.num_nodes();
        let to_base = match to_base {
            Some(m) => m,
            None => (0..n as NodeId).collect(),
        };
        if to_base.len() != n {
            return Err(Error::consistency("base vertex mapping does not cover the search graph"));
        }
        if to_base.iter().any(|&b| b as usize >= cch.num_nodes()) {
            return Err(Error::consistency("base vertex mapping leaves the base graph"));
        }
        Ok(CchPotentialAstar {
            potentials: LazyRphast::many_to_one(cch, base),
            search,
            to_base,
            dist: vec![INFINITY; n],
            touched: Vec::new(),
            settled: vec![false; n],
            heap: BinaryHeap::new(),
        })
    }

    fn potential(&mut self, v: NodeId) -> Weight {
        self.potentials.distance(self.to_base[v as usize]).expect("target selected")
    }

    pub fn query(&mut self, s: NodeId, t: NodeId) -> Result<AstarResult> {
        for v in self.touched.drain(..) {
            self.dist[v as usize] = INFINITY;
            self.settled[v as usize] = false;
        }
        self.heap.clear();
        self.potentials.select(self.to_base[t as usize]);

        let mut settled = 0;
        let start = self.potential(s);
        if start == INFINITY {
            return Ok(AstarResult { distance: INFINITY, settled });
        }
        self.dist[s as usize] = 0;
        self.touched.push(s);
        self.heap.push(Reverse((start, s)));
        while let Some(Reverse((_, u))) = self.heap.pop() {
            if self.settled[u as usize] {
                continue;
            }
            self.settled[u as usize] = true;
            settled += 1;
            let du = self.dist[u as usize];
            if u == t {
                return Ok(AstarResult { distance: du, settled });
            }
            let pu = self.potential(u);
            for (v, w) in self.search.neighbors(u) {
                let pv = self.potential(v);
                if pv == INFINITY || w == INFINITY {
                    continue;
                }
                if (w as u64) + (pv as u64) < pu as u64 {
                    return Err(Error::ContractViolation(format!(
                        "arc ({u}, {v}) has negative reduced cost; base weights are not lower bounds"
                    )));
                }
                let dv = link(du, w);
                if dv < self.dist[v as usize] {
                    if self.dist[v as usize] == INFINITY {
                        self.touched.push(v);
                    }
                    self.dist[v as usize] = dv;
                    self.heap.push(Reverse((link(dv, pv), v)));
                }
            }
        }
        Ok(AstarResult { distance: INFINITY, settled })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::customize::{customize, CustomizeOptions};
    use crate::graph::dijkstra;
    use crate::order::RankOrder;

    fn ring(n: u32, scale: u32) -> InputGraph {
        InputGraph::from_arcs(n as usize, (0..n).flat_map(|i| {
            let j = (i + 1) % n;
            [(i, j, scale * (1 + i % 3)), (j, i, scale * (2 + i % 2))]
        }))
        .0
    }

    #[test]
    fn exact_potential_settles_only_the_path() {
        let g = ring(12, 1);
        let cch = Cch::new(&g, &RankOrder::identity(12)).unwrap();
        let (c, _) = customize(&cch, &g, CustomizeOptions::new(true, 1)).unwrap();
        let mut astar = CchPotentialAstar::new(&cch, &c, &g, None).unwrap();
        let table: Vec<Vec<Weight>> = (0..12).map(|s| dijkstra(&g, s, None)).collect();
        for s in 0..12 {
            for t in 0..12 {
                let r = astar.query(s, t).unwrap();
                let d = table[s as usize][t as usize];
                assert_eq!(r.distance, d);
                let on_shortest = (0..12).filter(|&v| table[s as usize][v] + table[v][t as usize] == d).count();
                assert!(r.settled <= on_shortest);
            }
        }
    }

    #[test]
    fn inflated_weights_and_violations() {
        let g = ring(10, 1);
        let doubled = ring(10, 2);
        let cch = Cch::new(&g, &RankOrder::identity(10)).unwrap();
        let (base, _) = customize(&cch, &g, CustomizeOptions::new(true, 1)).unwrap();
        let mut astar = CchPotentialAstar::new(&cch, &base, &doubled, None).unwrap();
        assert_eq!(astar.query(0, 5).unwrap().distance, dijkstra(&doubled, 0, None)[5]);

        let (heavy, _) = customize(&cch, &doubled, CustomizeOptions::new(true, 1)).unwrap();
        let mut wrong = CchPotentialAstar::new(&cch, &heavy, &g, None).unwrap();
        let failures = (0..10).filter(|&t| matches!(wrong.query(0, t), Err(Error::ContractViolation(_)))).count();
        assert!(failures > 0);
    }
}
