//! Binary preprocessing artifact: magic `CCHP`, a version byte, then
//! little-endian u32 arrays.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Cch, EliminationTree, UpwardGraph};
use crate::decomposition::SeparatorDecomposition;
use crate::error::{Error, Result};
use crate::order::RankOrder;

const MAGIC: &[u8; 4] = b"CCHP";
const VERSION: u8 = 1;

pub(crate) struct ByteWriter<W: Write> {
    out: W,
}

impl<W: Write> ByteWriter<W> {
    pub fn new(out: W) -> Self {
        ByteWriter { out }
    }

    pub fn bytes(&mut self, b: &[u8]) -> Result<()> {
        Ok(self.out.write_all(b)?)
    }

    pub fn u32(&mut self, v: u32) -> Result<()> {
        self.bytes(&v.to_le_bytes())
    }

    pub fn u32s(&mut self, vs: &[u32]) -> Result<()> {
        let mut buf = Vec::with_capacity(4 * vs.len());
        for v in vs {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        self.bytes(&buf)
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

pub(crate) struct ByteReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        ByteReader { buf, pos: 0 }
    }

    pub fn bytes(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.buf.len()).ok_or_else(|| Error::Format("truncated artifact".into()))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.bytes(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes(4)?.try_into().unwrap()))
    }

    pub fn u32s(&mut self, len: usize) -> Result<Vec<u32>> {
        let raw = self.bytes(len.checked_mul(4).ok_or_else(|| Error::Format("array too large".into()))?)?;
        Ok(raw.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect())
    }

    pub fn expect_magic(&mut self, magic: &[u8; 4], version: u8) -> Result<()> {
        let found = self.bytes(4).map_err(|_| Error::Format("file too short for a header".into()))?;
        if found != magic {
            return Err(Error::Format(format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(found),
                String::from_utf8_lossy(magic)
            )));
        }
        let v = self.u8()?;
        if v != version {
            return Err(Error::Format(format!("unsupported version {v}, expected {version}")));
        }
        Ok(())
    }

    pub fn is_done(&self) -> bool {
        self.pos == self.buf.len()
    }
}

pub(crate) fn write_cch_body<W: Write>(cch: &Cch, w: &mut ByteWriter<W>) -> Result<()> {
    let up = cch.upward();
    w.u32(cch.num_nodes() as u32)?;
    w.u32(up.num_arcs() as u32)?;
    w.u32s(up.first_out())?;
    w.u32s(up.heads())?;
    w.u32s(up.tails())?;
    w.u32s(cch.tree().parents())?;
    w.u32s(cch.order().vertices())?;
    let words = cch.decomposition().to_words();
    w.u32(words.len() as u32)?;
    w.u32s(&words)
}

pub(crate) fn read_cch_body(r: &mut ByteReader<'_>) -> Result<Cch> {
    let n = r.u32()? as usize;
    let m = r.u32()? as usize;
    let first_out = r.u32s(n + 1)?;
    let head = r.u32s(m)?;
    let tail = r.u32s(m)?;
    let parent = r.u32s(n)?;
    let vertex_at = r.u32s(n)?;
    let word_count = r.u32()? as usize;
    let words = r.u32s(word_count)?;

    let upward = UpwardGraph::from_csr(first_out, head)?;
    if upward.tails() != tail.as_slice() {
        return Err(Error::consistency("stored tails disagree with offsets"));
    }
    if parent.iter().enumerate().any(|(v, &p)| p != u32::MAX && (p as usize <= v || p as usize >= n)) {
        return Err(Error::consistency("stored parent does not rank above its child"));
    }
    let tree = EliminationTree::from_parents(parent);
    let order = RankOrder::from_vertex_at(vertex_at)?;
    let (decomposition, used) = SeparatorDecomposition::from_words(&words)?;
    if used != words.len() {
        return Err(Error::Format("separator decomposition has trailing words".into()));
    }
    Cch::from_parts(order, upward, tree, decomposition)
}

pub fn write_cch(cch: &Cch, out: impl Write) -> Result<()> {
    let mut w = ByteWriter::new(out);
    w.bytes(MAGIC)?;
    w.bytes(&[VERSION])?;
    write_cch_body(cch, &mut w)?;
    w.finish()?;
    Ok(())
}

pub fn read_cch(bytes: &[u8]) -> Result<Cch> {
    let mut r = ByteReader::new(bytes);
    r.expect_magic(MAGIC, VERSION)?;
    let cch = read_cch_body(&mut r)?;
    if !r.is_done() {
        return Err(Error::Format("trailing bytes after preprocessing artifact".into()));
    }
    Ok(cch)
}

pub fn save_cch(cch: &Cch, path: impl AsRef<Path>) -> Result<()> {
    write_cch(cch, std::io::BufWriter::new(fs::File::create(path)?))
}

pub fn load_cch(path: impl AsRef<Path>) -> Result<Cch> {
    read_cch(&fs::read(path)?)
}
