//! Recursive nested dissection with inertial flow separators.

use rayon::prelude::*;

use super::inertial::{local_inertial_separator, SubGraph};
use super::RankOrder;
use crate::decomposition::{SeparatorDecomposition, SeparatorNode};
use crate::error::{Error, Result};
use crate::graph::{Coordinates, InputGraph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NdConfig {
    /// Cells with at most this many vertices are ordered directly.
    pub cell_cutoff: usize,
    /// Dissect sibling cells on the rayon pool.
    pub parallel: bool,
}

impl Default for NdConfig {
    fn default() -> Self {
        NdConfig { cell_cutoff: 8, parallel: true }
    }
}

/// A rank order together with the recursion tree that produced it.
#[derive(Debug, Clone)]
pub struct NestedDissection {
    pub order: RankOrder,
    pub decomposition: SeparatorDecomposition,
}

/// Recursion tree before ranks are assigned. `top` lists the node's own
/// vertices from lowest to highest rank.
struct Cell {
    top: Vec<NodeId>,
    children: Vec<Cell>,
}

pub fn nested_dissection_order(graph: &InputGraph, coords: &Coordinates) -> Result<NestedDissection> {
    nested_dissection_order_with(graph, coords, NdConfig::default())
}

pub fn nested_dissection_order_with(
    graph: &InputGraph,
    coords: &Coordinates,
    config: NdConfig,
) -> Result<NestedDissection> {
    let n = graph.num_nodes();
    if coords.len() != n {
        return Err(Error::consistency(format!("{} coordinates for {n} vertices", coords.len())));
    }
    let topology = graph.topology();
    let all: Vec<NodeId> = (0..n as NodeId).collect();
    let root = dissect(SubGraph::from_topology(&topology, &all), coords, &config);

    let mut vertex_at = Vec::with_capacity(n);
    let mut nodes = Vec::new();
    emit(&root, 0, &mut vertex_at, &mut nodes);
    let order = RankOrder::from_vertex_at(vertex_at)?;
    Ok(NestedDissection { order, decomposition: SeparatorDecomposition::from_preorder(nodes) })
}

fn leaf_order(sub: &SubGraph) -> Vec<NodeId> {
    let mut local: Vec<u32> = (0..sub.len() as u32).collect();
    local.sort_by_key(|&v| (sub.degree(v), sub.global[v as usize]));
    local.into_iter().map(|v| sub.global[v as usize]).collect()
}

fn dissect_all(subs: Vec<SubGraph>, coords: &Coordinates, config: &NdConfig) -> Vec<Cell> {
    if config.parallel {
        subs.into_par_iter().map(|s| dissect(s, coords, config)).collect()
    } else {
        subs.into_iter().map(|s| dissect(s, coords, config)).collect()
    }
}

fn dissect(sub: SubGraph, coords: &Coordinates, config: &NdConfig) -> Cell {
    if sub.len() <= config.cell_cutoff {
        return Cell { top: leaf_order(&sub), children: Vec::new() };
    }
    let (label, count) = sub.components(&vec![false; sub.len()]);
    if count > 1 {
        let parts = sub.group_by_label(&label, count).iter().map(|c| sub.induced(c)).collect();
        return Cell { top: Vec::new(), children: dissect_all(parts, coords, config) };
    }

    // Separators that leave a single component are stacked into this node;
    // later ones rank below earlier ones.
    let mut stacked: Vec<Vec<NodeId>> = Vec::new();
    let mut current = sub;
    let (bottom, children) = loop {
        let found = local_inertial_separator(&current, coords);
        let mut separator: Vec<NodeId> = found.separator.iter().map(|&v| current.global[v as usize]).collect();
        separator.sort_unstable();
        stacked.push(separator);
        if found.splits() {
            let parts = found.cells.iter().map(|c| current.induced(c)).collect();
            break (Vec::new(), dissect_all(parts, coords, config));
        }
        match found.cells.first() {
            None => break (Vec::new(), Vec::new()),
            Some(rest) => {
                current = current.induced(rest);
                if current.len() <= config.cell_cutoff {
                    break (leaf_order(&current), Vec::new());
                }
            }
        }
    };
    let mut top = bottom;
    for separator in stacked.into_iter().rev() {
        top.extend(separator);
    }
    Cell { top, children }
}

fn emit(cell: &Cell, lo: u32, vertex_at: &mut Vec<NodeId>, nodes: &mut Vec<SeparatorNode>) -> u32 {
    let id = nodes.len();
    nodes.push(SeparatorNode { cell: lo..lo, separator: lo..lo, children: Vec::new() });
    let mut next = lo;
    let mut children = Vec::with_capacity(cell.children.len());
    for child in &cell.children {
        children.push(nodes.len() as u32);
        next = emit(child, next, vertex_at, nodes);
    }
    vertex_at.extend_from_slice(&cell.top);
    let end = next + cell.top.len() as u32;
    nodes[id] = SeparatorNode { cell: lo..end, separator: next..end, children };
    end
}
