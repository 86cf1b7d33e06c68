//! Inertial flow separators: project on a geographic axis, contract the first
//! and last quarter into a source and a sink, and cut between them.

use super::flow::{unit_min_cut, FlowGraph};
use crate::graph::{Coordinates, NodeId, Topology};

const NONE: u32 = u32::MAX;

/// Share of vertices contracted into each of source and sink.
const CONTRACTED_FRACTION: f64 = 0.25;

/// A vertex separator of a cell and the connected cells left after removing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub separator: Vec<NodeId>,
    pub cells: Vec<Vec<NodeId>>,
}

/// Induced subgraph with local IDs; `global` is ascending.
#[derive(Debug, Clone)]
pub(crate) struct SubGraph {
    pub global: Vec<NodeId>,
    first_out: Vec<u32>,
    adj: Vec<u32>,
}

impl SubGraph {
    pub fn from_topology(topology: &Topology, cell: &[NodeId]) -> Self {
        let mut global = cell.to_vec();
        global.sort_unstable();
        global.dedup();
        let mut first_out = Vec::with_capacity(global.len() + 1);
        let mut adj = Vec::new();
        first_out.push(0);
        for &v in &global {
            for &w in topology.neighbors(v) {
                if let Ok(local) = global.binary_search(&w) {
                    adj.push(local as u32);
                }
            }
            first_out.push(adj.len() as u32);
        }
        SubGraph { global, first_out, adj }
    }

    /// Subgraph induced by ascending local IDs `keep`.
    pub fn induced(&self, keep: &[u32]) -> Self {
        let mut local = vec![NONE; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut first_out = Vec::with_capacity(keep.len() + 1);
        let mut adj = Vec::new();
        first_out.push(0);
        for &v in keep {
            adj.extend(self.neighbors(v).iter().map(|&w| local[w as usize]).filter(|&w| w != NONE));
            first_out.push(adj.len() as u32);
        }
        SubGraph { global: keep.iter().map(|&v| self.global[v as usize]).collect(), first_out, adj }
    }

    pub fn len(&self) -> usize {
        self.global.len()
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[self.first_out[v as usize] as usize..self.first_out[v as usize + 1] as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }

    /// Connected components of the subgraph minus `removed`. Labels are
    /// numbered by smallest member; removed vertices get `NONE`.
    pub fn components(&self, removed: &[bool]) -> (Vec<u32>, usize) {
        let mut label = vec![NONE; self.len()];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for start in 0..self.len() as u32 {
            if removed[start as usize] || label[start as usize] != NONE {
                continue;
            }
            label[start as usize] = count;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in self.neighbors(v) {
                    if !removed[w as usize] && label[w as usize] == NONE {
                        label[w as usize] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count as usize)
    }

    pub fn group_by_label(&self, label: &[u32], count: usize) -> Vec<Vec<u32>> {
        let mut groups = vec![Vec::new(); count];
        for (v, &l) in label.iter().enumerate() {
            if l != NONE {
                groups[l as usize].push(v as u32);
            }
        }
        groups
    }
}

/// Separator in local IDs with the resulting cells.
#[derive(Debug, Clone)]
pub(crate) struct LocalSeparator {
    pub separator: Vec<u32>,
    pub cells: Vec<Vec<u32>>,
}

impl LocalSeparator {
    pub fn splits(&self) -> bool {
        self.cells.len() >= 2
    }

    fn largest_cell(&self) -> usize {
        self.cells.iter().map(Vec::len).max().unwrap_or(0)
    }
}

fn projection(axis: usize, (x, y): (i32, i32)) -> i64 {
    let (x, y) = (x as i64, y as i64);
    match axis {
        0 => y,     // south - north
        1 => x,     // west - east
        2 => x + y, // south-west - north-east
        _ => y - x, // south-east - north-west
    }
}

fn degree_mask(sub: &SubGraph, vertices: &[u32]) -> Vec<bool> {
    let mut m = vec![false; sub.len()];
    for &v in vertices {
        m[v as usize] = true;
    }
    m
}

/// Shrinks `separator` to an inclusion-minimal separator between two of the
/// cells it induces. Non-splitting separators are returned unchanged.
fn minimalize(sub: &SubGraph, separator: Vec<u32>) -> LocalSeparator {
    let removed = degree_mask(sub, &separator);
    let (label, count) = sub.components(&removed);
    if count < 2 {
        let cells = sub.group_by_label(&label, count);
        return LocalSeparator { separator, cells };
    }
    let largest = |label: &[u32], count: usize, skip: u32| -> u32 {
        let mut size = vec![0usize; count];
        for &l in label {
            if l != NONE {
                size[l as usize] += 1;
            }
        }
        let mut best = NONE;
        for (l, &s) in size.iter().enumerate() {
            if l as u32 != skip && (best == NONE || s > size[best as usize]) {
                best = l as u32;
            }
        }
        best
    };
    let touches = |s: u32, label: &[u32], l: u32| sub.neighbors(s).iter().any(|&w| label[w as usize] == l);

    let a = largest(&label, count, NONE);
    let a_member = label.iter().position(|&l| l == a).unwrap();
    let s1: Vec<u32> = separator.iter().copied().filter(|&s| touches(s, &label, a)).collect();

    let (label, count) = sub.components(&degree_mask(sub, &s1));
    let a = label[a_member];
    let b = largest(&label, count, a);
    let s2: Vec<u32> = s1.iter().copied().filter(|&s| touches(s, &label, b)).collect();

    let (label, count) = sub.components(&degree_mask(sub, &s2));
    LocalSeparator { separator: s2, cells: sub.group_by_label(&label, count) }
}

/// `(does not split, |S|, largest cell, axis, variant)`, smaller is better.
type CandidateKey = (bool, usize, usize, usize, usize);

/// Best separator over the four axes for a connected subgraph with at least
/// two vertices.
pub(crate) fn local_inertial_separator(sub: &SubGraph, coords: &Coordinates) -> LocalSeparator {
    let n = sub.len();
    debug_assert!(n >= 2);
    let flow_graph = FlowGraph::from_adjacency(&sub.first_out, &sub.adj);
    let contracted = ((n as f64 * CONTRACTED_FRACTION) as usize).max(1);

    let mut best: Option<(CandidateKey, LocalSeparator)> = None;
    let mut by_projection: Vec<u32> = (0..n as u32).collect();
    for axis in 0..4 {
        by_projection.sort_by_key(|&v| (projection(axis, coords.get(sub.global[v as usize])), sub.global[v as usize]));
        let is_source = degree_mask(sub, &by_projection[..contracted]);
        let is_sink = degree_mask(sub, &by_projection[n - contracted..]);
        let cut = unit_min_cut(&flow_graph, &is_source, &is_sink);
        debug_assert!(cut.value > 0);

        let sink_closest: Vec<bool> = cut.sink_side.iter().map(|&t| !t).collect();
        for (cut_index, side) in [&cut.source_side, &sink_closest].into_iter().enumerate() {
            let mut inner = Vec::new();
            let mut outer = Vec::new();
            for v in 0..n as u32 {
                let crossing = sub.neighbors(v).iter().any(|&w| side[w as usize] != side[v as usize]);
                if crossing {
                    if side[v as usize] {
                        inner.push(v);
                    } else {
                        outer.push(v);
                    }
                }
            }
            for (side_index, endpoints) in [inner, outer].into_iter().enumerate() {
                let candidate = minimalize(sub, endpoints);
                let key = (
                    !candidate.splits(),
                    candidate.separator.len(),
                    candidate.largest_cell(),
                    axis,
                    2 * cut_index + side_index,
                );
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, candidate));
                }
            }
        }
    }
    best.expect("at least one candidate").1
}

/// Inertial flow separator for `cell` (vertex IDs of `topology`). A
/// disconnected cell is split into its components with an empty separator.
pub fn inertial_flow_separator(topology: &Topology, cell: &[NodeId], coords: &Coordinates) -> Separator {
    let sub = SubGraph::from_topology(topology, cell);
    let (label, count) = sub.components(&vec![false; sub.len()]);
    let to_global = |vs: &[u32]| vs.iter().map(|&v| sub.global[v as usize]).collect::<Vec<_>>();
    if count != 1 || sub.len() < 2 {
        let cells = sub.group_by_label(&label, count);
        return Separator { separator: Vec::new(), cells: cells.iter().map(|c| to_global(c)).collect() };
    }
    let local = local_inertial_separator(&sub, coords);
    Separator { separator: to_global(&local.separator), cells: local.cells.iter().map(|c| to_global(c)).collect() }
}
