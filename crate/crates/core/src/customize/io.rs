//! Customized artifact: magic `CCHC`, version byte, the preprocessing body,
//! a stage byte, then weights, unpacking pairs and deletion bytes.
//! Search graphs are rebuilt on load.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{CustomizedMetric, Customized, ParallelConfig, Stage, Unpack};
use crate::error::{Error, Result};
use crate::preprocess::{read_cch_body, write_cch_body, ByteReader, ByteWriter, Cch};

const MAGIC: &[u8; 4] = b"CCHC";
const VERSION: u8 = 1;

fn flatten(pairs: &[Unpack]) -> Vec<u32> {
    pairs.iter().flatten().copied().collect()
}

fn pairs(words: Vec<u32>) -> Vec<Unpack> {
    words.chunks_exact(2).map(|c| [c[0], c[1]]).collect()
}

pub fn write_customized(cch: &Cch, customized: &Customized, out: impl Write) -> Result<()> {
    let m = &customized.metric;
    let mut w = ByteWriter::new(out);
    w.bytes(MAGIC)?;
    w.bytes(&[VERSION])?;
    write_cch_body(cch, &mut w)?;
    w.bytes(&[match m.stage() {
        Stage::Respected => 0,
        Stage::Basic => 1,
        Stage::Perfect => 2,
    }])?;
    w.u32s(&m.up)?;
    w.u32s(&m.down)?;
    w.u32s(&flatten(&m.unpack_up))?;
    w.u32s(&flatten(&m.unpack_down))?;
    w.bytes(&m.delete_up)?;
    w.bytes(&m.delete_down)?;
    w.finish()?;
    Ok(())
}

pub fn read_customized(bytes: &[u8]) -> Result<(Cch, Customized)> {
    let mut r = ByteReader::new(bytes);
    r.expect_magic(MAGIC, VERSION)?;
    let cch = read_cch_body(&mut r)?;
    let stage = match r.u8()? {
        1 => Stage::Basic,
        2 => Stage::Perfect,
        s => return Err(Error::Format(format!("unknown customization stage {s}"))),
    };
    let m = cch.num_arcs();
    let up = r.u32s(m)?;
    let down = r.u32s(m)?;
    let unpack_up = pairs(r.u32s(2 * m)?);
    let unpack_down = pairs(r.u32s(2 * m)?);
    let delete_up = r.bytes(m)?.to_vec();
    let delete_down = r.bytes(m)?.to_vec();
    if !r.is_done() {
        return Err(Error::Format("trailing bytes after customized artifact".into()));
    }
    for pair in unpack_up.iter().chain(&unpack_down) {
        if *pair != super::NO_UNPACK && pair.iter().any(|&a| a as usize >= m) {
            return Err(Error::consistency("unpacking data references a missing arc"));
        }
    }
    let metric = CustomizedMetric::from_parts(up, down, unpack_up, unpack_down, delete_up, delete_down, stage);
    let customized = Customized::from_metric(metric, &cch, ParallelConfig::new(1))?;
    Ok((cch, customized))
}

pub fn save_customized(cch: &Cch, customized: &Customized, path: impl AsRef<Path>) -> Result<()> {
    write_customized(cch, customized, std::io::BufWriter::new(fs::File::create(path)?))
}

pub fn load_customized(path: impl AsRef<Path>) -> Result<(Cch, Customized)> {
    read_customized(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::customize::{customize, CustomizeOptions};
    use crate::graph::InputGraph;
    use crate::order::RankOrder;

    #[test]
    fn round_trip_both_modes() {
        let arcs = [(0, 1, 1), (0, 2, 10), (1, 3, 1), (2, 3, 1), (3, 2, 4)];
        let (g, _) = InputGraph::from_arcs(4, arcs);
        let cch = Cch::new(&g, &RankOrder::identity(4)).unwrap();
        for perfect in [false, true] {
            let (c, _) = customize(&cch, &g, CustomizeOptions::new(perfect, 2)).unwrap();
            let mut buf = Vec::new();
            write_customized(&cch, &c, &mut buf).unwrap();
            let (cch2, c2) = read_customized(&buf).unwrap();
            assert_eq!(cch2, cch);
            assert_eq!(c2, c);
            let mut again = Vec::new();
            write_customized(&cch2, &c2, &mut again).unwrap();
            assert_eq!(again, buf);
            assert!(read_customized(&buf[..buf.len() - 1]).is_err());
            let mut bad = buf.clone();
            bad[3] = b'P';
            assert!(matches!(read_customized(&bad), Err(Error::Format(_))));
        }
    }
}
