//! Nearest targets by walking the separator decomposition from the root,
//! pruning cells whose lower bound exceeds the current k-th distance.

use std::ops::Range;

use super::LazyRphast;
use crate::error::{Error, Result};
use crate::graph::{NodeId, Weight, INFINITY};
use crate::preprocess::Cch;

/// Targets as ascending, duplicate-free ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoiIndex {
    ranks: Vec<NodeId>,
}

impl PoiIndex {
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[NodeId] {
        &self.ranks
    }

    pub fn contains_rank(&self, r: NodeId) -> bool {
        self.ranks.binary_search(&r).is_ok()
    }

    /// Targets whose rank lies in `range`.
    pub fn in_range(&self, range: Range<u32>) -> &[NodeId] {
        let lo = self.ranks.partition_point(|&r| r < range.start);
        let hi = lo + self.ranks[lo..].partition_point(|&r| r < range.end);
        &self.ranks[lo..hi]
    }
}

/// Builds the index from original vertex IDs.
pub fn knn_select(cch: &Cch, targets: &[NodeId]) -> Result<PoiIndex> {
    let n = cch.num_nodes();
    let mut ranks = Vec::with_capacity(targets.len());
    for (i, &t) in targets.iter().enumerate() {
        if t as usize >= n {
            return Err(Error::Range { line: i + 1, id: t as u64, min: 0, max: (n as u64).saturating_sub(1) });
        }
        ranks.push(cch.order().rank(t));
    }
    ranks.sort_unstable();
    ranks.dedup();
    Ok(PoiIndex { ranks })
}

struct Search<'r, 'a> {
    rphast: &'r mut LazyRphast<'a>,
    poi: &'r PoiIndex,
    source: NodeId,
    k: usize,
    /// `(distance, original id)`, ascending, at most `k` entries.
    best: Vec<(Weight, NodeId)>,
}

impl Search<'_, '_> {
    fn kth(&self) -> Weight {
        if self.best.len() < self.k {
            INFINITY
        } else {
            self.best[self.k - 1].0
        }
    }

    fn offer(&mut self, entry: (Weight, NodeId)) {
        let pos = self.best.partition_point(|&e| e < entry);
        if pos < self.k {
            self.best.insert(pos, entry);
            self.best.truncate(self.k);
        }
    }

    fn lower_bound(&mut self, cell: Range<u32>) -> Result<Weight> {
        if cell.contains(&self.source) {
            return Ok(0);
        }
        // every path into the cell enters through an upward neighbor of its top vertex
        let top = cell.end - 1;
        self.rphast.distance_rank(top)?;
        let cch = self.rphast.cch();
        Ok(cch
            .upward()
            .upward(top)
            .iter()
            .map(|&w| self.rphast.memoized_rank(w).expect("ancestors are memoized"))
            .min()
            .unwrap_or(INFINITY))
    }

    fn visit(&mut self, node: u32) -> Result<()> {
        let cch = self.rphast.cch();
        let node = cch.decomposition().node(node);
        for &r in self.poi.in_range(node.separator.clone()) {
            let d = self.rphast.distance_rank(r)?;
            if d != INFINITY {
                self.offer((d, cch.order().vertex(r)));
            }
        }
        let mut cells = Vec::new();
        for &c in &node.children {
            let cell = cch.decomposition().node(c).cell.clone();
            if self.poi.in_range(cell.clone()).is_empty() {
                continue;
            }
            let lb = self.lower_bound(cell.clone())?;
            if lb != INFINITY {
                cells.push((lb, cell.start, c));
            }
        }
        cells.sort_unstable();
        for (lb, _, c) in cells {
            if lb > self.kth() {
                break;
            }
            self.visit(c)?;
        }
        Ok(())
    }
}

/// The `k` targets closest to the source selected in `rphast` (which must be
/// one-to-many), ascending by distance then original ID. Unreachable
/// targets are never reported.
pub fn knn_query(rphast: &mut LazyRphast<'_>, poi: &PoiIndex, k: usize) -> Result<Vec<(NodeId, Weight)>> {
    let source = rphast.source_rank().ok_or_else(|| Error::state("no source selected"))?;
    if k == 0 || poi.is_empty() {
        return Ok(Vec::new());
    }
    let mut search = Search { rphast, poi, source, k, best: Vec::with_capacity(k + 1) };
    search.visit(0)?;
    Ok(search.best.into_iter().map(|(d, v)| (v, d)).collect())
}
