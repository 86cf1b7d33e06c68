//! Rank orders: nested dissection via inertial flow, order files, and the
//! DFS post-order improvement.

mod dissection;
mod flow;
mod inertial;

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

pub use dissection::{nested_dissection_order, nested_dissection_order_with, NdConfig, NestedDissection};
pub use inertial::{inertial_flow_separator, Separator};

use crate::error::{Error, Result};
use crate::graph::{NodeId, INVALID_ID};
use crate::preprocess::EliminationTree;

/// A bijection between vertices and ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOrder {
    rank_of: Vec<NodeId>,
    vertex_at: Vec<NodeId>,
}

impl RankOrder {
    pub fn identity(n: usize) -> Self {
        let ids: Vec<NodeId> = (0..n as NodeId).collect();
        RankOrder { rank_of: ids.clone(), vertex_at: ids }
    }

    /// `vertex_at[r]` is the vertex with rank `r`.
    pub fn from_vertex_at(vertex_at: Vec<NodeId>) -> Result<Self> {
        let n = vertex_at.len();
        let mut rank_of = vec![INVALID_ID; n];
        for (r, &v) in vertex_at.iter().enumerate() {
            if v as usize >= n {
                return Err(Error::Range { line: r + 1, id: v as u64, min: 0, max: n as u64 - 1 });
            }
            if rank_of[v as usize] != INVALID_ID {
                return Err(Error::consistency(format!("vertex {v} appears twice in the order")));
            }
            rank_of[v as usize] = r as NodeId;
        }
        Ok(RankOrder { rank_of, vertex_at })
    }

    /// `rank_of[v]` is the rank of vertex `v`.
    pub fn from_ranks(rank_of: Vec<NodeId>) -> Result<Self> {
        let inverse = Self::from_vertex_at(rank_of)?;
        Ok(RankOrder { rank_of: inverse.vertex_at, vertex_at: inverse.rank_of })
    }

    pub fn len(&self) -> usize {
        self.rank_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank_of.is_empty()
    }

    #[inline]
    pub fn rank(&self, v: NodeId) -> NodeId {
        self.rank_of[v as usize]
    }

    #[inline]
    pub fn vertex(&self, r: NodeId) -> NodeId {
        self.vertex_at[r as usize]
    }

    pub fn ranks(&self) -> &[NodeId] {
        &self.rank_of
    }

    pub fn vertices(&self) -> &[NodeId] {
        &self.vertex_at
    }
}

pub fn import_order(path: impl AsRef<Path>, n: usize) -> Result<RankOrder> {
    parse_order(BufReader::new(File::open(path)?), n)
}

/// Line `r` holds the 0-based vertex with rank `r`.
pub fn parse_order(reader: impl BufRead, n: usize) -> Result<RankOrder> {
    let mut vertex_at = Vec::with_capacity(n);
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let tok = line.trim();
        if tok.is_empty() {
            continue;
        }
        let v: u64 = tok.parse().map_err(|_| Error::parse(idx + 1, format!("invalid vertex id `{tok}`")))?;
        if v >= n as u64 {
            return Err(Error::Range { line: idx + 1, id: v, min: 0, max: (n as u64).saturating_sub(1) });
        }
        vertex_at.push(v as NodeId);
    }
    if vertex_at.len() != n {
        return Err(Error::consistency(format!("order has {} entries, expected {n}", vertex_at.len())));
    }
    RankOrder::from_vertex_at(vertex_at)
}

pub fn write_order(order: &RankOrder, mut out: impl Write) -> Result<()> {
    for &v in order.vertices() {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

/// Reorders ranks to a DFS post-order of `tree`, which must have been built
/// from `order` (tree vertices are ranks of `order`). Children are visited in
/// ascending rank, roots likewise. The augmented graph is unchanged up to
/// relabeling.
pub fn dfs_postorder_reorder(order: &RankOrder, tree: &EliminationTree) -> Result<RankOrder> {
    let n = order.len();
    if tree.len() != n {
        return Err(Error::consistency(format!("elimination tree has {} vertices, order has {n}", tree.len())));
    }
    let children = tree.children();
    let mut vertex_at = Vec::with_capacity(n);
    let mut stack: Vec<(NodeId, usize)> = Vec::new();
    for root in tree.roots() {
        stack.push((root, 0));
        while let Some(top) = stack.last_mut() {
            let (node, next) = *top;
            if let Some(&child) = children.of(node).get(next) {
                top.1 += 1;
                stack.push((child, 0));
            } else {
                stack.pop();
                vertex_at.push(order.vertex(node));
            }
        }
    }
    RankOrder::from_vertex_at(vertex_at)
}
