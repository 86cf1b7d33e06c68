//! Separator decompositions over rank space.
//!
//! Every node owns a contiguous rank range (its cell). The separator is a
//! suffix of that range and the children's cells tile the rest in ascending
//! order, so every rank belongs to exactly one node's separator.

use std::fmt::Write as _;
use std::ops::Range;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorNode {
    pub cell: Range<u32>,
    pub separator: Range<u32>,
    pub children: Vec<u32>,
}

impl SeparatorNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn cell_size(&self) -> usize {
        self.cell.len()
    }
}

/// Nodes are stored in preorder; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorDecomposition {
    nodes: Vec<SeparatorNode>,
}

impl SeparatorDecomposition {
    pub(crate) fn from_preorder(nodes: Vec<SeparatorNode>) -> Self {
        SeparatorDecomposition { nodes }
    }

    pub fn root(&self) -> &SeparatorNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: u32) -> &SeparatorNode {
        &self.nodes[id as usize]
    }

    pub fn nodes(&self) -> &[SeparatorNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn num_vertices(&self) -> usize {
        self.root().cell.len()
    }

    /// Checks the tiling invariants for a decomposition over `n` ranks.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::consistency(msg));
        if self.nodes.is_empty() {
            return bad("empty decomposition".into());
        }
        if self.root().cell != (0..n as u32) {
            return bad(format!("root cell {:?} does not cover 0..{n}", self.root().cell));
        }
        let mut seen = 0usize;
        for (i, node) in self.nodes.iter().enumerate() {
            seen += node.separator.len();
            if node.separator.end != node.cell.end || node.separator.start < node.cell.start {
                return bad(format!("node {i}: separator {:?} is not a suffix of {:?}", node.separator, node.cell));
            }
            let mut next = node.cell.start;
            for &c in &node.children {
                if c as usize <= i || c as usize >= self.nodes.len() {
                    return bad(format!("node {i}: child {c} breaks preorder"));
                }
                let child = &self.nodes[c as usize].cell;
                if child.start != next || child.is_empty() {
                    return bad(format!("node {i}: child cell {child:?} does not continue at {next}"));
                }
                next = child.end;
            }
            if next != node.separator.start {
                return bad(format!("node {i}: children end at {next}, separator starts at {}", node.separator.start));
            }
        }
        if seen != n {
            return bad(format!("separators cover {seen} of {n} ranks"));
        }
        Ok(())
    }

    /// Flat preorder encoding: node count, then per node
    /// `cell.start, cell.end, sep.start, sep.end, child_count`.
    pub fn to_words(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(1 + 5 * self.nodes.len());
        out.push(self.nodes.len() as u32);
        for node in &self.nodes {
            out.extend([
                node.cell.start,
                node.cell.end,
                node.separator.start,
                node.separator.end,
                node.children.len() as u32,
            ]);
        }
        out
    }

    /// Inverse of [`to_words`](Self::to_words). Returns the decomposition and
    /// the number of words consumed.
    pub fn from_words(words: &[u32]) -> Result<(Self, usize)> {
        let truncated = || Error::Format("truncated separator decomposition".into());
        let count = *words.first().ok_or_else(truncated)? as usize;
        let body = words.get(1..1 + 5 * count).ok_or_else(truncated)?;
        let mut nodes: Vec<SeparatorNode> = Vec::with_capacity(count);
        // (node, children still expected)
        let mut open: Vec<(usize, u32)> = Vec::new();
        for (i, rec) in body.chunks_exact(5).enumerate() {
            while let Some(&(_, 0)) = open.last() {
                open.pop();
            }
            if let Some((parent, remaining)) = open.last_mut() {
                nodes[*parent].children.push(i as u32);
                *remaining -= 1;
            } else if i != 0 {
                return Err(Error::Format("separator decomposition has more than one root".into()));
            }
            nodes.push(SeparatorNode { cell: rec[0]..rec[1], separator: rec[2]..rec[3], children: Vec::new() });
            open.push((i, rec[4]));
        }
        if open.iter().any(|&(_, r)| r != 0) {
            return Err(truncated());
        }
        if nodes.is_empty() {
            return Err(Error::Format("separator decomposition without nodes".into()));
        }
        Ok((SeparatorDecomposition { nodes }, 1 + 5 * count))
    }

    /// Indented text dump; `label` maps a rank to the printed vertex name.
    pub fn dump(&self, label: impl Fn(u32) -> u32) -> String {
        let mut out = String::new();
        let mut stack = vec![(0u32, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let node = self.node(id);
            let sep: Vec<String> = node.separator.clone().map(|r| label(r).to_string()).collect();
            let _ = writeln!(
                out,
                "{:indent$}cell {}..{} ({} vertices) separator [{}]",
                "",
                node.cell.start,
                node.cell.end,
                node.cell.len(),
                sep.join(" "),
                indent = 2 * depth
            );
            for &c in node.children.iter().rev() {
                stack.push((c, depth + 1));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SeparatorDecomposition {
        SeparatorDecomposition::from_preorder(vec![
            SeparatorNode { cell: 0..5, separator: 4..5, children: vec![1, 3] },
            SeparatorNode { cell: 0..2, separator: 1..2, children: vec![2] },
            SeparatorNode { cell: 0..1, separator: 0..1, children: vec![] },
            SeparatorNode { cell: 2..4, separator: 2..4, children: vec![] },
        ])
    }

    #[test]
    fn words_round_trip() {
        let d = sample();
        d.validate(5).unwrap();
        let words = d.to_words();
        let (back, used) = SeparatorDecomposition::from_words(&words).unwrap();
        assert_eq!(used, words.len());
        assert_eq!(back, d);
    }

    #[test]
    fn truncated_words_are_rejected() {
        let words = sample().to_words();
        assert!(SeparatorDecomposition::from_words(&words[..words.len() - 1]).is_err());
        assert!(SeparatorDecomposition::from_words(&[]).is_err());
    }

    #[test]
    fn validate_catches_gaps() {
        let d = SeparatorDecomposition::from_preorder(vec![
            SeparatorNode { cell: 0..3, separator: 2..3, children: vec![1] },
            SeparatorNode { cell: 0..1, separator: 0..1, children: vec![] },
        ]);
        assert!(d.validate(3).is_err());
    }

    #[test]
    fn dump_indents_children() {
        let text = sample().dump(|r| r);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("cell 0..5"));
        assert!(lines[1].starts_with("  cell 0..2"));
        assert!(lines[2].starts_with("    cell 0..1"));
    }
}
