//! Search graphs for queries: one per direction, either the whole augmented
//! graph or the arcs that survived perfect customization.

use std::ops::Range;

use rayon::prelude::*;

use super::shared::{with_pool, UnsafeSlice};
use super::{CustomizedMetric, ParallelConfig, Unpack, NO_UNPACK};
use crate::graph::{ArcId, NodeId, Weight, INVALID_ID};
use crate::preprocess::UpwardGraph;

/// Upward arcs of one search direction. In the forward graph arc `uv` means
/// `u -> v`, in the backward graph `v -> u`. Unpacking pairs reference the
/// other direction's graph first, this graph second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchGraph {
    first_out: Vec<ArcId>,
    head: Vec<NodeId>,
    tail: Vec<NodeId>,
    weight: Vec<Weight>,
    unpack: Vec<Unpack>,
    /// Augmented arc ID to arc ID in this graph, `INVALID_ID` if dropped.
    arc_map: Vec<ArcId>,
}

impl SearchGraph {
    pub fn num_nodes(&self) -> usize {
        self.first_out.len() - 1
    }

    pub fn num_arcs(&self) -> usize {
        self.head.len()
    }

    #[inline]
    pub fn arc_range(&self, u: NodeId) -> Range<usize> {
        self.first_out[u as usize] as usize..self.first_out[u as usize + 1] as usize
    }

    pub fn first_out(&self) -> &[ArcId] {
        &self.first_out
    }

    pub fn heads(&self) -> &[NodeId] {
        &self.head
    }

    pub fn tails(&self) -> &[NodeId] {
        &self.tail
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weight
    }

    pub fn unpacks(&self) -> &[Unpack] {
        &self.unpack
    }

    pub fn arc_map(&self) -> &[ArcId] {
        &self.arc_map
    }

    #[inline]
    pub fn head(&self, a: usize) -> NodeId {
        self.head[a]
    }

    #[inline]
    pub fn tail(&self, a: usize) -> NodeId {
        self.tail[a]
    }

    #[inline]
    pub fn weight(&self, a: usize) -> Weight {
        self.weight[a]
    }

    #[inline]
    pub fn unpack(&self, a: usize) -> Option<Unpack> {
        let p = self.unpack[a];
        (p != NO_UNPACK).then_some(p)
    }

    /// Arc ID in this graph of augmented arc `a`.
    pub fn mapped(&self, a: ArcId) -> Option<ArcId> {
        let m = self.arc_map[a as usize];
        (m != INVALID_ID).then_some(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchGraphs {
    pub forward: SearchGraph,
    pub backward: SearchGraph,
}

impl SearchGraphs {
    /// Both directions over every augmented arc.
    pub fn whole(graph: &UpwardGraph, metric: &CustomizedMetric) -> Self {
        let make = |weight: &[Weight], unpack: &[Unpack]| SearchGraph {
            first_out: graph.first_out().to_vec(),
            head: graph.heads().to_vec(),
            tail: graph.tails().to_vec(),
            weight: weight.to_vec(),
            unpack: unpack.to_vec(),
            arc_map: (0..graph.num_arcs() as ArcId).collect(),
        };
        SearchGraphs { forward: make(&metric.up, &metric.unpack_up), backward: make(&metric.down, &metric.unpack_down) }
    }
}

/// Vertex boundaries of `chunks` consecutive pieces of roughly equal arc
/// count; a piece starts at the tail of its first arc.
fn chunk_starts(graph: &UpwardGraph, chunks: usize) -> Vec<NodeId> {
    let (n, m) = (graph.num_nodes(), graph.num_arcs());
    let size = m.div_ceil(chunks).max(1);
    let mut starts: Vec<NodeId> = (0..chunks)
        .map(|i| if i == 0 { 0 } else if i * size < m { graph.tail(ArcId::try_from(i * size).unwrap()) } else { n as NodeId })
        .collect();
    starts.push(n as NodeId);
    starts
}

/// Copies the surviving arcs of one direction: count per chunk, copy per
/// chunk with the old-to-new mapping. Unpacking data is still in augmented IDs.
fn copy_surviving(
    graph: &UpwardGraph,
    weight: &[Weight],
    unpack: &[Unpack],
    delete: &[u8],
    starts: &[NodeId],
) -> SearchGraph {
    let (n, m) = (graph.num_nodes(), graph.num_arcs());
    let chunks: Vec<(NodeId, NodeId)> = starts.windows(2).map(|w| (w[0], w[1])).collect();
    let arcs_of = |(lo, hi): (NodeId, NodeId)| graph.first_out()[lo as usize] as usize..graph.first_out()[hi as usize] as usize;

    let counts: Vec<usize> =
        chunks.par_iter().map(|&c| arcs_of(c).filter(|&a| delete[a] == 0).count()).collect();
    let mut offsets = Vec::with_capacity(chunks.len() + 1);
    offsets.push(0usize);
    for c in &counts {
        offsets.push(offsets.last().unwrap() + c);
    }
    let total = *offsets.last().unwrap();

    let mut first_out = vec![0 as ArcId; n + 1];
    let mut head = vec![0 as NodeId; total];
    let mut tail = vec![0 as NodeId; total];
    let mut new_weight = vec![0 as Weight; total];
    let mut new_unpack = vec![NO_UNPACK; total];
    let mut arc_map = vec![INVALID_ID; m];
    {
        let first_out = UnsafeSlice::new(&mut first_out);
        let head = UnsafeSlice::new(&mut head);
        let tail = UnsafeSlice::new(&mut tail);
        let new_weight = UnsafeSlice::new(&mut new_weight);
        let new_unpack = UnsafeSlice::new(&mut new_unpack);
        let arc_map = UnsafeSlice::new(&mut arc_map);
        chunks.par_iter().enumerate().for_each(|(i, &(lo, hi))| {
            let mut next = offsets[i];
            for u in lo..hi {
                // SAFETY: chunks own disjoint vertex ranges, hence disjoint
                // old arc ranges and disjoint output ranges.
                unsafe {
                    first_out.set(u as usize, next as ArcId);
                    for a in graph.arc_range(u) {
                        if delete[a] != 0 {
                            arc_map.set(a, INVALID_ID);
                            continue;
                        }
                        head.set(next, graph.head(a as ArcId));
                        tail.set(next, u);
                        new_weight.set(next, weight[a]);
                        new_unpack.set(next, unpack[a]);
                        arc_map.set(a, next as ArcId);
                        next += 1;
                    }
                }
            }
        });
    }
    first_out[n] = total as ArcId;
    SearchGraph { first_out, head, tail, weight: new_weight, unpack: new_unpack, arc_map }
}

fn remap(unpack: &mut [Unpack], other: &[ArcId], same: &[ArcId]) {
    unpack.par_iter_mut().for_each(|p| {
        if *p != NO_UNPACK {
            *p = [other[p[0] as usize], same[p[1] as usize]];
        }
    });
}

/// Drops the arc directions marked for deletion and remaps unpacking data
/// into the reduced IDs. The result does not depend on the thread count.
pub fn build_reduced(metric: &CustomizedMetric, graph: &UpwardGraph, config: ParallelConfig) -> SearchGraphs {
    with_pool(config.threads, || {
        let starts = chunk_starts(graph, (config.beta * config.threads).max(1));
        let (mut forward, mut backward) = rayon::join(
            || copy_surviving(graph, &metric.up, &metric.unpack_up, &metric.delete_up, &starts),
            || copy_surviving(graph, &metric.down, &metric.unpack_down, &metric.delete_down, &starts),
        );
        let (fwd_map, bwd_map) = (forward.arc_map.clone(), backward.arc_map.clone());
        rayon::join(
            || remap(&mut forward.unpack, &bwd_map, &fwd_map),
            || remap(&mut backward.unpack, &fwd_map, &bwd_map),
        );
        SearchGraphs { forward, backward }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::customize::{basic_sweep, perfect, respect};
    use crate::graph::InputGraph;
    use crate::order::RankOrder;
    use crate::preprocess::Cch;

    fn grid_cch() -> (Cch, CustomizedMetric) {
        let mut arcs = Vec::new();
        let w = 6u32;
        for v in 0..w * w {
            if v % w + 1 < w {
                arcs.push((v, v + 1, 1 + v % 7));
                arcs.push((v + 1, v, 2 + v % 5));
            }
            if v + w < w * w {
                arcs.push((v, v + w, 3 + v % 4));
                arcs.push((v + w, v, 1 + v % 3));
            }
        }
        let (g, _) = InputGraph::from_arcs((w * w) as usize, arcs);
        let cch = Cch::new(&g, &RankOrder::identity((w * w) as usize)).unwrap();
        let mut m = respect(&cch, &g).unwrap();
        basic_sweep(&mut m, cch.upward()).unwrap();
        (cch, m)
    }

    #[test]
    fn no_deletions_keep_layout() {
        let (cch, m) = grid_cch();
        let reduced = build_reduced(&m, cch.upward(), ParallelConfig::new(3));
        assert_eq!(reduced, SearchGraphs::whole(cch.upward(), &m));
    }

    #[test]
    fn chunk_starts_are_monotone_and_cover() {
        let (cch, _) = grid_cch();
        for chunks in [1, 2, 7, 64, 10_000] {
            let s = chunk_starts(cch.upward(), chunks);
            assert_eq!(s.len(), chunks + 1);
            assert_eq!(*s.last().unwrap() as usize, cch.num_nodes());
            assert!(s.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn thread_count_does_not_matter() {
        let (cch, mut m) = grid_cch();
        perfect(&mut m, &cch, ParallelConfig::new(1)).unwrap();
        let one = build_reduced(&m, cch.upward(), ParallelConfig::new(1));
        assert!(one.forward.num_arcs() < cch.num_arcs());
        for t in [2, 5, 16] {
            assert_eq!(build_reduced(&m, cch.upward(), ParallelConfig::new(t)), one);
        }
        // witnesses of surviving arcs survive themselves
        for g in [&one.forward, &one.backward] {
            assert!(g.unpacks().iter().all(|p| *p == NO_UNPACK || !p.contains(&INVALID_ID)));
        }
    }
}
