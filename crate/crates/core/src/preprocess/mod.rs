//! Metric-independent preprocessing: contraction into the augmented upward
//! graph, the elimination tree and the separator decomposition read off it.

mod io;

use std::ops::Range;

pub use io::{load_cch, read_cch, save_cch, write_cch};
pub(crate) use io::{read_cch_body, write_cch_body, ByteReader, ByteWriter};

use crate::decomposition::{SeparatorDecomposition, SeparatorNode};
use crate::error::{Error, Result};
use crate::graph::{ArcId, InputGraph, NodeId, INVALID_ID};
use crate::order::{dfs_postorder_reorder, RankOrder};

/// Relabels `graph` so that vertex IDs equal ranks.
pub fn permute_to_rank_ids(graph: &InputGraph, order: &RankOrder) -> Result<InputGraph> {
    if order.len() != graph.num_nodes() {
        return Err(Error::consistency(format!(
            "order covers {} vertices, graph has {}",
            order.len(),
            graph.num_nodes()
        )));
    }
    Ok(InputGraph::from_arcs(graph.num_nodes(), graph.arcs().map(|(u, v, w)| (order.rank(u), order.rank(v), w))).0)
}

/// The augmented graph as upward arcs grouped by tail, heads ascending, plus
/// the downward incidence lists (arcs entering each vertex from below,
/// ordered by tail).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpwardGraph {
    first_out: Vec<ArcId>,
    head: Vec<NodeId>,
    tail: Vec<NodeId>,
    first_in: Vec<u32>,
    in_arcs: Vec<ArcId>,
}

impl UpwardGraph {
    /// Validates the layout and builds tails and downward incidence.
    pub fn from_csr(first_out: Vec<ArcId>, head: Vec<NodeId>) -> Result<Self> {
        if first_out.first() != Some(&0) || *first_out.last().unwrap() as usize != head.len() {
            return Err(Error::consistency("upward graph offsets do not match the arc count"));
        }
        let n = first_out.len() - 1;
        for u in 0..n {
            if first_out[u] > first_out[u + 1] {
                return Err(Error::consistency("upward graph offsets not monotone"));
            }
            let mut prev = u as NodeId;
            for &v in &head[first_out[u] as usize..first_out[u + 1] as usize] {
                if v <= prev || v as usize >= n {
                    return Err(Error::consistency(format!("upward arc ({u}, {v}) breaks rank order")));
                }
                prev = v;
            }
        }
        Ok(Self::from_parts(first_out, head))
    }

    fn from_parts(first_out: Vec<ArcId>, head: Vec<NodeId>) -> Self {
        let n = first_out.len() - 1;
        let mut tail = Vec::with_capacity(head.len());
        for u in 0..n {
            tail.extend(std::iter::repeat_n(u as NodeId, (first_out[u + 1] - first_out[u]) as usize));
        }
        let mut first_in = vec![0u32; n + 1];
        for &v in &head {
            first_in[v as usize + 1] += 1;
        }
        for i in 0..n {
            first_in[i + 1] += first_in[i];
        }
        let mut fill = first_in.clone();
        let mut in_arcs = vec![0; head.len()];
        for (a, &v) in head.iter().enumerate() {
            in_arcs[fill[v as usize] as usize] = a as ArcId;
            fill[v as usize] += 1;
        }
        UpwardGraph { first_out, head, tail, first_in, in_arcs }
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

    pub fn heads(&self) -> &[NodeId] {
        &self.head
    }

    pub fn tails(&self) -> &[NodeId] {
        &self.tail
    }

    #[inline]
    pub fn arc_range(&self, u: NodeId) -> Range<usize> {
        self.first_out[u as usize] as usize..self.first_out[u as usize + 1] as usize
    }

    /// Upward neighbors of `u`, ascending.
    #[inline]
    pub fn upward(&self, u: NodeId) -> &[NodeId] {
        &self.head[self.arc_range(u)]
    }

    #[inline]
    pub fn head(&self, a: ArcId) -> NodeId {
        self.head[a as usize]
    }

    #[inline]
    pub fn tail(&self, a: ArcId) -> NodeId {
        self.tail[a as usize]
    }

    /// Arcs `wu` with `w < u`, ordered by ascending `w`.
    #[inline]
    pub fn downward_arcs(&self, u: NodeId) -> &[ArcId] {
        &self.in_arcs[self.first_in[u as usize] as usize..self.first_in[u as usize + 1] as usize]
    }

    /// The arc joining `u` and `v`, in either argument order.
    pub fn find_arc(&self, u: NodeId, v: NodeId) -> Option<ArcId> {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let r = self.arc_range(lo);
        self.head[r.clone()].binary_search(&hi).ok().map(|i| (r.start + i) as ArcId)
    }
}

/// Contracts a rank-labeled graph: every vertex's upward neighborhood is
/// completed to a clique, processing vertices by ascending rank.
pub fn contract(graph: &InputGraph) -> UpwardGraph {
    let n = graph.num_nodes();
    let topology = graph.topology();
    let mut pending: Vec<Vec<NodeId>> = (0..n as NodeId)
        .map(|u| topology.neighbors(u).iter().copied().filter(|&v| v > u).collect())
        .collect();
    let mut first_out = Vec::with_capacity(n + 1);
    let mut head = Vec::new();
    first_out.push(0);
    for u in 0..n {
        let mut up = std::mem::take(&mut pending[u]);
        up.sort_unstable();
        up.dedup();
        if let Some((&parent, rest)) = up.split_first() {
            pending[parent as usize].extend_from_slice(rest);
        }
        head.extend_from_slice(&up);
        first_out.push(head.len() as ArcId);
    }
    UpwardGraph::from_parts(first_out, head)
}

/// Per-vertex parent pointers; roots hold [`INVALID_ID`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTree {
    parent: Vec<NodeId>,
}

/// Children lists of an elimination tree, each ascending.
#[derive(Debug, Clone)]
pub struct Children {
    first: Vec<u32>,
    list: Vec<NodeId>,
}

impl Children {
    pub fn of(&self, v: NodeId) -> &[NodeId] {
        &self.list[self.first[v as usize] as usize..self.first[v as usize + 1] as usize]
    }
}

impl EliminationTree {
    /// Panics if a parent does not rank above its child.
    pub fn from_parents(parent: Vec<NodeId>) -> Self {
        for (v, &p) in parent.iter().enumerate() {
            assert!(p == INVALID_ID || (p as usize > v && (p as usize) < parent.len()), "bad parent {p} of {v}");
        }
        EliminationTree { parent }
    }

    /// The parent of `u` is its lowest upward neighbor.
    pub fn from_upward(graph: &UpwardGraph) -> Self {
        let parent = (0..graph.num_nodes() as NodeId)
            .map(|u| graph.upward(u).first().copied().unwrap_or(INVALID_ID))
            .collect();
        EliminationTree { parent }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    #[inline]
    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let p = self.parent[v as usize];
        (p != INVALID_ID).then_some(p)
    }

    pub fn parents(&self) -> &[NodeId] {
        &self.parent
    }

    pub fn roots(&self) -> Vec<NodeId> {
        (0..self.len() as NodeId).filter(|&v| self.parent[v as usize] == INVALID_ID).collect()
    }

    pub fn children(&self) -> Children {
        let n = self.len();
        let mut first = vec![0u32; n + 1];
        for &p in &self.parent {
            if p != INVALID_ID {
                first[p as usize + 1] += 1;
            }
        }
        for i in 0..n {
            first[i + 1] += first[i];
        }
        let mut fill = first.clone();
        let mut list = vec![0; first[n] as usize];
        for (v, &p) in self.parent.iter().enumerate() {
            if p != INVALID_ID {
                list[fill[p as usize] as usize] = v as NodeId;
                fill[p as usize] += 1;
            }
        }
        Children { first, list }
    }

    /// Vertices on the path from `v` to its root, `v` first.
    pub fn root_path(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(v), move |&u| self.parent(u))
    }

    /// Number of vertices on the longest root path.
    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.len()];
        let mut best = 0;
        for v in (0..self.len()).rev() {
            depth[v] = self.parent(v as NodeId).map_or(1, |p| depth[p as usize] + 1);
            best = best.max(depth[v]);
        }
        best
    }

    /// Subtree sizes; parents always rank above children.
    pub fn subtree_sizes(&self) -> Vec<u32> {
        let mut size = vec![1u32; self.len()];
        for v in 0..self.len() {
            if let Some(p) = self.parent(v as NodeId) {
                size[p as usize] += size[v];
            }
        }
        size
    }
}

/// Reads the separator decomposition off an elimination tree whose subtrees
/// occupy contiguous rank ranges: the separator of a subtree is the path from
/// its root down to the first vertex with other than one child.
pub fn reconstruct_separator_decomposition(tree: &EliminationTree) -> Result<SeparatorDecomposition> {
    let n = tree.len();
    let size = tree.subtree_sizes();
    let children = tree.children();
    let roots = tree.roots();
    let range = |v: NodeId| (v + 1 - size[v as usize])..(v + 1);

    let tiles = |parts: &[NodeId], whole: Range<u32>| {
        let mut next = whole.start;
        for &c in parts {
            if range(c).start != next {
                return false;
            }
            next = range(c).end;
        }
        next == whole.end
    };
    if !tiles(&roots, 0..n as u32) {
        return Err(Error::consistency("tree roots do not tile the rank range; order is not a DFS post-order"));
    }
    for v in 0..n as NodeId {
        if !tiles(children.of(v), range(v).start..v) {
            return Err(Error::consistency(format!("subtree of {v} is not contiguous; order is not a DFS post-order")));
        }
    }

    enum Task {
        Synthetic,
        Subtree(NodeId),
    }
    let mut nodes: Vec<SeparatorNode> = Vec::new();
    let mut stack: Vec<(Task, Option<usize>)> = Vec::new();
    if roots.len() == 1 {
        stack.push((Task::Subtree(roots[0]), None));
    } else {
        stack.push((Task::Synthetic, None));
    }
    while let Some((task, parent)) = stack.pop() {
        let id = nodes.len();
        if let Some(p) = parent {
            nodes[p].children.push(id as u32);
        }
        let (node, below) = match task {
            Task::Synthetic => {
                let all = 0..n as u32;
                (SeparatorNode { cell: all.clone(), separator: all.end..all.end, children: Vec::new() }, roots.clone())
            }
            Task::Subtree(top) => {
                let mut bottom = top;
                while let [only] = children.of(bottom) {
                    bottom = *only;
                }
                let node = SeparatorNode { cell: range(top), separator: bottom..top + 1, children: Vec::new() };
                (node, children.of(bottom).to_vec())
            }
        };
        nodes.push(node);
        for &c in below.iter().rev() {
            stack.push((Task::Subtree(c), Some(id)));
        }
    }
    let decomposition = SeparatorDecomposition::from_preorder(nodes);
    decomposition.validate(n)?;
    Ok(decomposition)
}

/// All metric-independent preprocessing results. Vertex IDs inside are ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cch {
    order: RankOrder,
    upward: UpwardGraph,
    tree: EliminationTree,
    decomposition: SeparatorDecomposition,
}

impl Cch {
    /// Contracts under `order` improved to a DFS post-order of its
    /// elimination tree (which leaves post-orders unchanged).
    pub fn new(graph: &InputGraph, order: &RankOrder) -> Result<Self> {
        let first = contract(&permute_to_rank_ids(graph, order)?);
        let order = dfs_postorder_reorder(order, &EliminationTree::from_upward(&first))?;
        let upward = contract(&permute_to_rank_ids(graph, &order)?);
        let tree = EliminationTree::from_upward(&upward);
        let decomposition = reconstruct_separator_decomposition(&tree)?;
        Ok(Cch { order, upward, tree, decomposition })
    }

    /// Reassembles loaded parts, checking that they fit together.
    pub fn from_parts(
        order: RankOrder,
        upward: UpwardGraph,
        tree: EliminationTree,
        decomposition: SeparatorDecomposition,
    ) -> Result<Self> {
        let n = order.len();
        if upward.num_nodes() != n || tree.len() != n {
            return Err(Error::consistency("preprocessing parts disagree on the vertex count"));
        }
        if tree != EliminationTree::from_upward(&upward) {
            return Err(Error::consistency("elimination tree does not match the upward graph"));
        }
        decomposition.validate(n)?;
        Ok(Cch { order, upward, tree, decomposition })
    }

    pub fn num_nodes(&self) -> usize {
        self.order.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.upward.num_arcs()
    }

    pub fn order(&self) -> &RankOrder {
        &self.order
    }

    pub fn upward(&self) -> &UpwardGraph {
        &self.upward
    }

    pub fn tree(&self) -> &EliminationTree {
        &self.tree
    }

    pub fn decomposition(&self) -> &SeparatorDecomposition {
        &self.decomposition
    }

    /// Augmented arcs not present in the topology of `graph` (original IDs).
    pub fn num_shortcuts(&self, graph: &InputGraph) -> usize {
        self.num_arcs() - graph.topology().num_edges()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undirected(n: usize, edges: &[(u32, u32)]) -> InputGraph {
        InputGraph::from_arcs(n, edges.iter().flat_map(|&(a, b)| [(a, b, 1), (b, a, 1)])).0
    }

    fn arc_set(g: &UpwardGraph) -> Vec<(NodeId, NodeId)> {
        (0..g.num_arcs() as ArcId).map(|a| (g.tail(a), g.head(a))).collect()
    }

    #[test]
    fn diamond_gets_one_shortcut() {
        // u=0, v=1, w=2, x=3
        let g = undirected(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let up = contract(&g);
        assert_eq!(arc_set(&up), vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let tree = EliminationTree::from_upward(&up);
        assert_eq!(tree.parents(), &[1, 2, 3, INVALID_ID]);
        assert_eq!(up.downward_arcs(2), &[1, 2]);
        assert_eq!(up.find_arc(2, 1), Some(2));
    }

    #[test]
    fn clique_completion_of_upper_neighborhood() {
        // v=0 with upward neighbors w1..w4 = 1..4; existing w1w4, w2w3, w2w4
        let g = undirected(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 3), (2, 4)]);
        let up = contract(&g);
        let before: Vec<_> = [(1, 4), (2, 3), (2, 4)].into();
        let added: Vec<_> = arc_set(&up).into_iter().filter(|&(a, b)| a != 0 && !before.contains(&(a, b))).collect();
        assert_eq!(added, vec![(1, 2), (1, 3), (3, 4)]);
    }

    #[test]
    fn path_has_no_shortcuts() {
        let g = undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(contract(&g).num_arcs(), 4);
    }

    #[test]
    fn edgeless_tree_is_all_roots() {
        let tree = EliminationTree::from_upward(&contract(&undirected(3, &[])));
        assert_eq!(tree.roots(), vec![0, 1, 2]);
        let d = reconstruct_separator_decomposition(&tree).unwrap();
        assert_eq!(d.root().children.len(), 3);
        assert!(d.root().separator.is_empty());
    }

    #[test]
    fn permutation_relabels() {
        let (g, _) = InputGraph::from_arcs(2, [(0, 1, 7)]);
        let order = RankOrder::from_vertex_at(vec![1, 0]).unwrap();
        let p = permute_to_rank_ids(&g, &order).unwrap();
        assert_eq!(p.arcs().collect::<Vec<_>>(), vec![(1, 0, 7)]);
        assert_eq!(permute_to_rank_ids(&g, &RankOrder::identity(2)).unwrap(), g);
        assert!(permute_to_rank_ids(&g, &RankOrder::identity(3)).is_err());
    }

    #[test]
    fn path_tree_is_one_separator() {
        let tree = EliminationTree::from_parents(vec![1, 2, INVALID_ID]);
        let d = reconstruct_separator_decomposition(&tree).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.root().separator, 0..3);
    }

    #[test]
    fn fork_splits_into_leaves() {
        let tree = EliminationTree::from_parents(vec![2, 2, INVALID_ID]);
        let d = reconstruct_separator_decomposition(&tree).unwrap();
        assert_eq!(d.root().separator, 2..3);
        let cells: Vec<_> = d.root().children.iter().map(|&c| d.node(c).cell.clone()).collect();
        assert_eq!(cells, vec![0..1, 1..2]);
    }

    #[test]
    fn non_contiguous_subtrees_are_rejected() {
        // 0 -> 2, 1 -> 3, 2 -> 3: subtree of 2 is {0, 2}
        let tree = EliminationTree::from_parents(vec![2, 3, 3, INVALID_ID]);
        assert!(matches!(reconstruct_separator_decomposition(&tree), Err(Error::Consistency(_))));
    }

    #[test]
    fn cch_pipeline_reorders_to_postorder() {
        let g = undirected(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
        let order = RankOrder::from_vertex_at(vec![0, 5, 2, 4, 1, 3]).unwrap();
        let cch = Cch::new(&g, &order).unwrap();
        cch.decomposition().validate(6).unwrap();
        assert_eq!(cch.num_shortcuts(&g), contract(&permute_to_rank_ids(&g, &order).unwrap()).num_arcs() - 5);
        // already a post-order: unchanged
        let again = Cch::new(&g, cch.order()).unwrap();
        assert_eq!(again.order(), cch.order());
    }

    #[test]
    fn upward_csr_validation() {
        assert!(UpwardGraph::from_csr(vec![0, 1, 1], vec![1]).is_ok());
        assert!(UpwardGraph::from_csr(vec![0, 1, 1], vec![0]).is_err());
        assert!(UpwardGraph::from_csr(vec![0, 0, 1], vec![0]).is_err());
    }
}
