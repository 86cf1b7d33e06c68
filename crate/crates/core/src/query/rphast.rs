//! Lazy one-to-many (or many-to-one) distances: one climb from the fixed
//! endpoint, then memoized top-down evaluation along each requested root path.

use crate::customize::{Customized, SearchGraph};
use crate::error::{Error, Result};
use crate::graph::{link, NodeId, Weight, INFINITY};
use crate::preprocess::Cch;

pub struct LazyRphast<'a> {
    cch: &'a Cch,
    climb: &'a SearchGraph,
    descend: &'a SearchGraph,
    climb_dist: Vec<Weight>,
    climbed: Vec<NodeId>,
    memo: Vec<Weight>,
    known: Vec<bool>,
    memoized: Vec<NodeId>,
    stack: Vec<NodeId>,
    source: Option<NodeId>,
    relaxed: u64,
}

impl<'a> LazyRphast<'a> {
    /// Distances from one source to many targets.
    pub fn one_to_many(cch: &'a Cch, customized: &'a Customized) -> Self {
        Self::with_graphs(cch, &customized.graphs.forward, &customized.graphs.backward)
    }

    /// Distances from many sources to one target.
    pub fn many_to_one(cch: &'a Cch, customized: &'a Customized) -> Self {
        Self::with_graphs(cch, &customized.graphs.backward, &customized.graphs.forward)
    }

    fn with_graphs(cch: &'a Cch, climb: &'a SearchGraph, descend: &'a SearchGraph) -> Self {
        let n = cch.num_nodes();
        LazyRphast {
            cch,
            climb,
            descend,
            climb_dist: vec![INFINITY; n],
            climbed: Vec::new(),
            memo: vec![INFINITY; n],
            known: vec![false; n],
            memoized: Vec::new(),
            stack: Vec::new(),
            source: None,
            relaxed: 0,
        }
    }

    /// Fixes the endpoint shared by all following queries (original ID).
    pub fn select(&mut self, v: NodeId) {
        self.select_rank(self.cch.order().rank(v));
    }

    pub(crate) fn select_rank(&mut self, s: NodeId) {
        for v in self.climbed.drain(..) {
            self.climb_dist[v as usize] = INFINITY;
        }
        for v in self.memoized.drain(..) {
            self.known[v as usize] = false;
            self.memo[v as usize] = INFINITY;
        }
        self.climb_dist[s as usize] = 0;
        let tree = self.cch.tree();
        let mut next = Some(s);
        while let Some(u) = next {
            self.climbed.push(u);
            let d = self.climb_dist[u as usize];
            if d != INFINITY {
                for a in self.climb.arc_range(u) {
                    let via = link(d, self.climb.weight(a));
                    let h = self.climb.head(a) as usize;
                    if via < self.climb_dist[h] {
                        self.climb_dist[h] = via;
                    }
                }
            }
            next = tree.parent(u);
        }
        self.source = Some(s);
        self.relaxed = 0;
    }

    /// Distance between the selected endpoint and `t` (original IDs).
    pub fn distance(&mut self, t: NodeId) -> Result<Weight> {
        self.distance_rank(self.cch.order().rank(t))
    }

    pub(crate) fn distance_rank(&mut self, t: NodeId) -> Result<Weight> {
        if self.source.is_none() {
            return Err(Error::state("no source selected"));
        }
        let tree = self.cch.tree();
        let mut next = Some(t);
        while let Some(v) = next {
            if self.known[v as usize] {
                break;
            }
            self.stack.push(v);
            next = tree.parent(v);
        }
        while let Some(v) = self.stack.pop() {
            let mut best = self.climb_dist[v as usize];
            let range = self.descend.arc_range(v);
            self.relaxed += range.len() as u64;
            for a in range {
                best = best.min(link(self.descend.weight(a), self.memo[self.descend.head(a) as usize]));
            }
            self.memo[v as usize] = best;
            self.known[v as usize] = true;
            self.memoized.push(v);
        }
        Ok(self.memo[t as usize])
    }

    /// Memoized distance of a vertex whose root path was evaluated already.
    pub(crate) fn memoized_rank(&self, v: NodeId) -> Option<Weight> {
        self.known[v as usize].then_some(self.memo[v as usize])
    }

    pub(crate) fn source_rank(&self) -> Option<NodeId> {
        self.source
    }

    pub(crate) fn cch(&self) -> &'a Cch {
        self.cch
    }

    /// Arcs relaxed by distance evaluations since the source was selected.
    pub fn relaxed_arcs(&self) -> u64 {
        self.relaxed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::customize::{customize, CustomizeOptions};
    use crate::graph::InputGraph;
    use crate::order::RankOrder;

    #[test]
    fn diamond_one_to_many() {
        let arcs = [(0, 1, 1), (0, 2, 10), (1, 3, 1), (2, 3, 1)];
        let (g, _) = InputGraph::from_arcs(4, arcs.iter().flat_map(|&(a, b, w)| [(a, b, w), (b, a, w)]));
        let cch = Cch::new(&g, &RankOrder::identity(4)).unwrap();
        let (c, _) = customize(&cch, &g, CustomizeOptions::new(true, 1)).unwrap();
        let mut r = LazyRphast::one_to_many(&cch, &c);
        assert!(matches!(r.distance(0), Err(Error::State(_))));
        r.select(0);
        assert_eq!(r.distance(2).unwrap(), 3);
        assert_eq!(r.memoized_rank(3), Some(2));
        let used = r.relaxed_arcs();
        assert_eq!(r.distance(2).unwrap(), 3);
        assert_eq!(r.relaxed_arcs(), used);
        assert_eq!(r.distance(0).unwrap(), 0);

        let mut back = LazyRphast::many_to_one(&cch, &c);
        back.select(2);
        assert_eq!(back.distance(0).unwrap(), 3);
        assert_eq!(back.distance(3).unwrap(), 1);
    }
}
