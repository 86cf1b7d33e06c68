//! Unit-capacity maximum flow on undirected graphs via shortest augmenting
//! paths (BFS), with a super-source/super-sink given as vertex masks.

use std::collections::VecDeque;

const NONE: u32 = u32::MAX;

/// Undirected graph where each edge `{a, b}` is a pair of opposite arcs.
#[derive(Debug, Clone)]
pub(crate) struct FlowGraph {
    first_out: Vec<u32>,
    head: Vec<u32>,
    rev: Vec<u32>,
}

impl FlowGraph {
    /// `adjacency[a]` lists the neighbors of `a`; must be symmetric.
    pub fn from_adjacency(first_out: &[u32], neighbors: &[u32]) -> Self {
        let n = first_out.len() - 1;
        let mut rev = vec![NONE; neighbors.len()];
        // heads are sorted per vertex, so the reverse arc is found by binary search
        for a in 0..n {
            for e in first_out[a] as usize..first_out[a + 1] as usize {
                let b = neighbors[e] as usize;
                let range = first_out[b] as usize..first_out[b + 1] as usize;
                let pos = neighbors[range.clone()].binary_search(&(a as u32)).expect("adjacency must be symmetric");
                rev[e] = (range.start + pos) as u32;
            }
        }
        FlowGraph { first_out: first_out.to_vec(), head: neighbors.to_vec(), rev }
    }

    pub fn num_nodes(&self) -> usize {
        self.first_out.len() - 1
    }

    fn arcs(&self, v: usize) -> std::ops::Range<usize> {
        self.first_out[v] as usize..self.first_out[v + 1] as usize
    }
}

#[derive(Debug, Clone)]
pub(crate) struct MinCut {
    pub value: usize,
    /// Vertices reachable from the sources in the final residual graph.
    pub source_side: Vec<bool>,
    /// Vertices that can still reach a sink in the final residual graph.
    pub sink_side: Vec<bool>,
}

pub(crate) fn unit_min_cut(g: &FlowGraph, is_source: &[bool], is_sink: &[bool]) -> MinCut {
    let n = g.num_nodes();
    // flow on arc e in {-1, 0, 1}; residual capacity is 1 - flow
    let mut flow = vec![0i8; g.head.len()];
    let mut pred = vec![NONE; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut value = 0;

    loop {
        seen.iter_mut().for_each(|s| *s = false);
        queue.clear();
        for v in 0..n {
            if is_source[v] {
                seen[v] = true;
                pred[v] = NONE;
                queue.push_back(v);
            }
        }
        let mut reached = NONE;
        'bfs: while let Some(v) = queue.pop_front() {
            for e in g.arcs(v) {
                let w = g.head[e] as usize;
                if seen[w] || flow[e] >= 1 {
                    continue;
                }
                seen[w] = true;
                pred[w] = e as u32;
                if is_sink[w] {
                    reached = w as u32;
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        if reached == NONE {
            break;
        }
        let mut v = reached as usize;
        while pred[v] != NONE {
            let e = pred[v] as usize;
            flow[e] += 1;
            flow[g.rev[e] as usize] -= 1;
            v = g.head[g.rev[e] as usize] as usize;
        }
        value += 1;
    }

    // the last failed BFS left exactly the source-reachable set in `seen`
    let source_side = seen;

    let mut sink_side = vec![false; n];
    queue.clear();
    for v in 0..n {
        if is_sink[v] {
            sink_side[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for e in g.arcs(v) {
            let u = g.head[e] as usize;
            // residual arc u -> v is the reverse of e
            if !sink_side[u] && flow[g.rev[e] as usize] < 1 {
                sink_side[u] = true;
                queue.push_back(u);
            }
        }
    }

    MinCut { value, source_side, sink_side }
}
