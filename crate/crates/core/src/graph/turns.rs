//! Turn costs and restrictions modelled into the graph: every original arc
//! becomes a vertex, every permitted turn an arc.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{link, ArcId, InputGraph, NodeId, Weight, INFINITY, INVALID_ID};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurnCost {
    Cost(Weight),
    Forbidden,
}

/// Turn costs keyed by `(incoming arc, outgoing arc)`. Turns not listed are free.
#[derive(Debug, Clone, Default)]
pub struct TurnTable {
    turns: HashMap<(ArcId, ArcId), TurnCost>,
}

impl TurnTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, in_arc: ArcId, out_arc: ArcId, cost: TurnCost) {
        self.turns.insert((in_arc, out_arc), cost);
    }

    pub fn get(&self, in_arc: ArcId, out_arc: ArcId) -> TurnCost {
        self.turns.get(&(in_arc, out_arc)).copied().unwrap_or(TurnCost::Cost(0))
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    /// Charges `cost` for every U-turn `(x, y) -> (y, x)` in `graph`.
    pub fn with_u_turn_cost(graph: &InputGraph, cost: TurnCost) -> Self {
        let mut table = TurnTable::new();
        for (a, (x, y, _)) in graph.arcs().enumerate() {
            if let Some(b) = graph.find_arc(y, x) {
                table.insert(a as ArcId, b, cost);
            }
        }
        table
    }
}

pub fn load_turn_table(path: impl AsRef<Path>, graph: &InputGraph) -> Result<TurnTable> {
    parse_turn_table(BufReader::new(File::open(path)?), graph)
}

/// Parses lines `t <inTail> <inHead> <outHead> <cost|x>` with 1-based vertex IDs.
pub fn parse_turn_table(reader: impl BufRead, graph: &InputGraph) -> Result<TurnTable> {
    let n = graph.num_nodes() as u64;
    let mut table = TurnTable::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => continue,
            Some(&"t") if toks.len() == 5 => {}
            Some(_) => return Err(Error::parse(line_no, "expected `t <inTail> <inHead> <outHead> <cost|x>`")),
        }
        let mut ids = [0 as NodeId; 3];
        for (slot, tok) in ids.iter_mut().zip(&toks[1..4]) {
            let id: u64 = tok.parse().map_err(|_| Error::parse(line_no, format!("invalid vertex id `{tok}`")))?;
            if id == 0 || id > n {
                return Err(Error::Range { line: line_no, id, min: 1, max: n });
            }
            *slot = (id - 1) as NodeId;
        }
        let cost = match toks[4] {
            "x" => TurnCost::Forbidden,
            tok => {
                let c: Weight = tok.parse().map_err(|_| Error::parse(line_no, format!("invalid turn cost `{tok}`")))?;
                if c == INFINITY {
                    TurnCost::Forbidden
                } else {
                    TurnCost::Cost(c)
                }
            }
        };
        let [x, y, z] = ids;
        let a = graph
            .find_arc(x, y)
            .ok_or_else(|| Error::consistency(format!("line {line_no}: no arc ({}, {})", x + 1, y + 1)))?;
        let b = graph
            .find_arc(y, z)
            .ok_or_else(|| Error::consistency(format!("line {line_no}: no arc ({}, {})", y + 1, z + 1)))?;
        table.insert(a, b, cost);
    }
    Ok(table)
}

/// A turn-expanded graph and its mapping back to the original arcs.
#[derive(Debug, Clone)]
pub struct TurnExpansion {
    pub graph: InputGraph,
    arc_to_vertex: Vec<NodeId>,
    vertex_to_arc: Vec<ArcId>,
    arc_tail: Vec<NodeId>,
    arc_head: Vec<NodeId>,
}

impl TurnExpansion {
    /// Expanded vertex representing original arc `arc`, if the arc has finite weight.
    pub fn vertex_of_arc(&self, arc: ArcId) -> Option<NodeId> {
        Some(self.arc_to_vertex[arc as usize]).filter(|&v| v != INVALID_ID)
    }

    pub fn arc_of_vertex(&self, v: NodeId) -> ArcId {
        self.vertex_to_arc[v as usize]
    }

    /// Tail of the original arc behind expanded vertex `v`.
    pub fn original_tail(&self, v: NodeId) -> NodeId {
        self.arc_tail[self.vertex_to_arc[v as usize] as usize]
    }

    /// Head of the original arc behind expanded vertex `v`.
    pub fn original_head(&self, v: NodeId) -> NodeId {
        self.arc_head[self.vertex_to_arc[v as usize] as usize]
    }
}

/// Expanded graph: one vertex per finite original arc, and for each permitted
/// turn `a -> b` an arc of weight `ℓ(a) + cost(a, b)`.
pub fn expand_turns(graph: &InputGraph, turns: &TurnTable) -> Result<TurnExpansion> {
    let m = graph.num_arcs();
    let arc_tail = graph.tails();
    let arc_head = graph.head().to_vec();
    for &(a, b) in turns.turns.keys() {
        if a as usize >= m || b as usize >= m {
            return Err(Error::consistency(format!("turn ({a}, {b}) references a nonexistent arc")));
        }
        if arc_head[a as usize] != arc_tail[b as usize] {
            return Err(Error::consistency(format!("arcs {a} and {b} do not share a via vertex")));
        }
    }

    let mut arc_to_vertex = vec![INVALID_ID; m];
    let mut vertex_to_arc = Vec::new();
    for (a, &w) in graph.weight().iter().enumerate() {
        if w != INFINITY {
            arc_to_vertex[a] = vertex_to_arc.len() as NodeId;
            vertex_to_arc.push(a as ArcId);
        }
    }

    let mut arcs = Vec::new();
    for (ev, &a) in vertex_to_arc.iter().enumerate() {
        let len = graph.weight()[a as usize];
        let via = arc_head[a as usize];
        for b in graph.arc_range(via) {
            let target = arc_to_vertex[b];
            if target == INVALID_ID {
                continue;
            }
            if let TurnCost::Cost(c) = turns.get(a, b as ArcId) {
                arcs.push((ev as NodeId, target, link(len, c)));
            }
        }
    }
    let (expanded, _) = InputGraph::from_arcs(vertex_to_arc.len(), arcs);
    Ok(TurnExpansion { graph: expanded, arc_to_vertex, vertex_to_arc, arc_tail, arc_head })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::dijkstra;

    #[test]
    fn free_turns_on_two_arc_path() {
        let (g, _) = InputGraph::from_arcs(3, [(0, 1, 4), (1, 2, 6)]);
        let x = expand_turns(&g, &TurnTable::new()).unwrap();
        assert_eq!(x.graph.num_nodes(), 2);
        assert_eq!(x.graph.arcs().collect::<Vec<_>>(), vec![(0, 1, 4)]);
    }

    #[test]
    fn forbidden_turn_disconnects() {
        let (g, _) = InputGraph::from_arcs(3, [(0, 1, 4), (1, 2, 6)]);
        let mut turns = TurnTable::new();
        turns.insert(0, 1, TurnCost::Forbidden);
        let x = expand_turns(&g, &turns).unwrap();
        let s = x.vertex_of_arc(0).unwrap();
        let t = x.vertex_of_arc(1).unwrap();
        assert_eq!(dijkstra(&x.graph, s, None)[t as usize], INFINITY);
    }

    #[test]
    fn u_turn_cost_applies_only_to_u_turns() {
        // 0 <-> 1 <-> 2
        let (g, _) = InputGraph::from_arcs(3, [(0, 1, 1), (1, 0, 1), (1, 2, 2), (2, 1, 2)]);
        let turns = TurnTable::with_u_turn_cost(&g, TurnCost::Cost(100));
        let x = expand_turns(&g, &turns).unwrap();
        let a01 = x.vertex_of_arc(g.find_arc(0, 1).unwrap()).unwrap();
        let a12 = x.vertex_of_arc(g.find_arc(1, 2).unwrap()).unwrap();
        let a10 = x.vertex_of_arc(g.find_arc(1, 0).unwrap()).unwrap();
        assert_eq!(x.graph.arc_weight(a01, a12), 1);
        assert_eq!(x.graph.arc_weight(a01, a10), 101);
        assert_eq!(x.original_tail(a12), 1);
        assert_eq!(x.original_head(a12), 2);
    }

    #[test]
    fn rejects_unrelated_arcs() {
        let (g, _) = InputGraph::from_arcs(4, [(0, 1, 4), (2, 3, 6)]);
        let mut turns = TurnTable::new();
        turns.insert(0, 1, TurnCost::Cost(3));
        assert!(expand_turns(&g, &turns).is_err());
        let mut turns = TurnTable::new();
        turns.insert(0, 7, TurnCost::Cost(3));
        assert!(expand_turns(&g, &turns).is_err());
    }

    #[test]
    fn parses_turn_file() {
        let (g, _) = InputGraph::from_arcs(3, [(0, 1, 4), (1, 2, 6), (1, 0, 4)]);
        let t = parse_turn_table("c x\nt 1 2 3 7\nt 1 2 1 x\n".as_bytes(), &g).unwrap();
        assert_eq!(t.get(0, g.find_arc(1, 2).unwrap()), TurnCost::Cost(7));
        assert_eq!(t.get(0, g.find_arc(1, 0).unwrap()), TurnCost::Forbidden);
        assert!(matches!(parse_turn_table("t 1 3 2 7\n".as_bytes(), &g), Err(Error::Consistency(_))));
        assert!(matches!(parse_turn_table("t 1 2 9 7\n".as_bytes(), &g), Err(Error::Range { .. })));
    }
}
