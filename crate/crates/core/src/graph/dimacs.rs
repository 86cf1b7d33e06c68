//! DIMACS shortest-path challenge text formats (`.gr` arcs, `.co` coordinates).
//! IDs are 1-based on disk and 0-based in memory.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{InputGraph, NodeId, Weight, INFINITY};
use crate::error::{Error, Result};

/// A parsed `.gr` file.
#[derive(Debug, Clone)]
pub struct DimacsGraph {
    pub graph: InputGraph,
    /// Number of `a u u w` lines that were dropped.
    pub self_loops: usize,
}

/// Per-vertex fixed-point coordinates, `x` is longitude and `y` latitude.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coordinates {
    pub points: Vec<(i32, i32)>,
}

impl Coordinates {
    pub fn new(points: Vec<(i32, i32)>) -> Self {
        Coordinates { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn get(&self, v: NodeId) -> (i32, i32) {
        self.points[v as usize]
    }
}

pub fn load_dimacs_gr(path: impl AsRef<Path>) -> Result<DimacsGraph> {
    parse_dimacs_gr(BufReader::new(File::open(path)?))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

fn parse_id(tok: Option<&str>, line: usize, n: usize) -> Result<NodeId> {
    let id: u64 = parse_num(tok, line, "vertex id")?;
    if id == 0 || id > n as u64 {
        return Err(Error::Range { line, id, min: 1, max: n as u64 });
    }
    Ok((id - 1) as NodeId)
}

pub fn parse_dimacs_gr(reader: impl BufRead) -> Result<DimacsGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs: Vec<(NodeId, NodeId, Weight)> = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate problem line"));
                }
                if toks.next() != Some("sp") {
                    return Err(Error::parse(line_no, "expected `p sp <n> <m>`"));
                }
                let n: usize = parse_num(toks.next(), line_no, "vertex count")?;
                let m: usize = parse_num(toks.next(), line_no, "arc count")?;
                if n >= u32::MAX as usize {
                    return Err(Error::parse(line_no, "vertex count too large"));
                }
                header = Some((n, m));
                arcs.reserve(m);
            }
            Some("a") => {
                let (n, _) = header.ok_or_else(|| Error::parse(line_no, "arc before problem line"))?;
                let u = parse_id(toks.next(), line_no, n)?;
                let v = parse_id(toks.next(), line_no, n)?;
                let w: u64 = parse_num(toks.next(), line_no, "weight")?;
                if w >= INFINITY as u64 {
                    return Err(Error::parse(line_no, format!("weight {w} exceeds the finite range")));
                }
                arcs.push((u, v, w as Weight));
            }
            Some(other) => return Err(Error::parse(line_no, format!("unknown line type `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(Error::parse(line_no, "trailing tokens"));
        }
    }

    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing problem line"))?;
    if arcs.len() != m {
        return Err(Error::consistency(format!("problem line announces {m} arcs, found {}", arcs.len())));
    }
    let (graph, self_loops) = InputGraph::from_arcs(n, arcs);
    Ok(DimacsGraph { graph, self_loops })
}

/// Writes `graph` in `.gr` format. Arcs whose weight is [`INFINITY`] are skipped.
pub fn write_dimacs_gr(graph: &InputGraph, mut out: impl Write) -> Result<()> {
    let finite = graph.weight().iter().filter(|&&w| w != INFINITY).count();
    writeln!(out, "p sp {} {}", graph.num_nodes(), finite)?;
    for (u, v, w) in graph.arcs() {
        if w != INFINITY {
            writeln!(out, "a {} {} {}", u + 1, v + 1, w)?;
        }
    }
    Ok(())
}

pub fn load_dimacs_co(path: impl AsRef<Path>, n: usize) -> Result<Coordinates> {
    parse_dimacs_co(BufReader::new(File::open(path)?), n)
}

pub fn parse_dimacs_co(reader: impl BufRead, n: usize) -> Result<Coordinates> {
    let mut points: Vec<Option<(i32, i32)>> = vec![None; n];
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") | Some("p") => continue,
            Some("v") => {
                let v = parse_id(toks.next(), line_no, n)?;
                let x: i32 = parse_num(toks.next(), line_no, "x coordinate")?;
                let y: i32 = parse_num(toks.next(), line_no, "y coordinate")?;
                if toks.next().is_some() {
                    return Err(Error::parse(line_no, "trailing tokens"));
                }
                if points[v as usize].replace((x, y)).is_some() {
                    return Err(Error::consistency(format!("line {line_no}: duplicate entry for vertex {}", v + 1)));
                }
            }
            Some(other) => return Err(Error::parse(line_no, format!("unknown line type `{other}`"))),
        }
    }
    let points = points
        .into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or_else(|| Error::consistency(format!("no coordinates for vertex {}", v + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Coordinates { points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(text: &str) -> Result<DimacsGraph> {
        parse_dimacs_gr(text.as_bytes())
    }

    #[test]
    fn single_arc() {
        let g = gr("c test\np sp 2 1\na 1 2 5\n").unwrap().graph;
        assert_eq!(g.num_nodes(), 2);
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1, 5)]);
        assert_eq!(g.arc_weight(1, 0), INFINITY);
    }

    #[test]
    fn duplicate_arcs_keep_minimum() {
        let g = gr("p sp 2 2\na 1 2 5\na 1 2 3\n").unwrap().graph;
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1, 3)]);
    }

    #[test]
    fn self_loops_are_counted() {
        let d = gr("p sp 2 2\na 1 1 5\na 1 2 3\n").unwrap();
        assert_eq!(d.self_loops, 1);
        assert_eq!(d.graph.num_arcs(), 1);
    }

    #[test]
    fn diamond_topology() {
        // u=1, v=2, w=3, x=4
        let g = gr("p sp 4 4\na 1 2 1\na 1 3 10\na 2 4 1\na 3 4 1\n").unwrap().graph;
        let t = g.topology();
        assert_eq!(t.num_edges(), 4);
        assert_eq!(t.neighbors(0), &[1, 2]);
        assert_eq!(t.neighbors(3), &[1, 2]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match gr("p sp 2 1\na 1 x 5\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match gr("p sp 2 1\na 1 3 5\n") {
            Err(Error::Range { line: 2, id: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match gr("p sp 2 1\na 0 1 5\n") {
            Err(Error::Range { line: 2, id: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(gr("p sp 2 2\na 1 2 5\n"), Err(Error::Consistency(_))));
        assert!(matches!(gr("a 1 2 5\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(gr("p sp 2 1\nq\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let (g, _) = InputGraph::from_arcs(4, [(0, 1, 3), (1, 0, 4), (2, 3, 1), (3, 1, 9)]);
        let mut buf = Vec::new();
        write_dimacs_gr(&g, &mut buf).unwrap();
        assert_eq!(gr(std::str::from_utf8(&buf).unwrap()).unwrap().graph, g);
    }

    #[test]
    fn coordinates() {
        let c = parse_dimacs_co("v 1 0 0\n".as_bytes(), 1).unwrap();
        assert_eq!(c.points, vec![(0, 0)]);
        let c = parse_dimacs_co("p aux sp co 2\nv 2 -5 7\nv 1 3 4\n".as_bytes(), 2).unwrap();
        assert_eq!(c.points, vec![(3, 4), (-5, 7)]);
        assert!(matches!(parse_dimacs_co("v 1 0 0\n".as_bytes(), 2), Err(Error::Consistency(_))));
        assert!(matches!(parse_dimacs_co("v 1 0 0\nv 1 0 0\n".as_bytes(), 1), Err(Error::Consistency(_))));
        assert!(matches!(parse_dimacs_co("v 3 0 0\n".as_bytes(), 2), Err(Error::Range { .. })));
    }
}
