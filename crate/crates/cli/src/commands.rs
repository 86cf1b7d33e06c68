use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use cch::customize::{customize as run_customize, load_customized, save_customized, CustomizeOptions};
use cch::graph::{knn_dijkstra, load_dimacs_co, load_dimacs_gr, InputGraph, NodeId, Weight, INFINITY};
use cch::order::{import_order, nested_dissection_order_with, write_order, NdConfig, RankOrder};
use cch::preprocess::{load_cch, save_cch, Cch};
use cch::query::{knn_query, knn_select, LazyRphast, Query};

use crate::KnnAlgo;

pub fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn load_graph(path: &Path) -> Result<InputGraph> {
    let parsed = load_dimacs_gr(path).with_context(|| format!("reading {}", path.display()))?;
    if parsed.self_loops > 0 {
        eprintln!("note: dropped {} self-loops from {}", parsed.self_loops, path.display());
    }
    Ok(parsed.graph)
}

/// Order from coordinates (nested dissection) or from an order file.
pub fn obtain_order(graph: &InputGraph, coords: Option<&Path>, order: Option<&Path>, threads: usize) -> Result<RankOrder> {
    let n = graph.num_nodes();
    match (coords, order) {
        (_, Some(path)) => Ok(import_order(path, n).with_context(|| format!("reading {}", path.display()))?),
        (Some(path), None) => {
            let coords = load_dimacs_co(path, n).with_context(|| format!("reading {}", path.display()))?;
            let config = NdConfig { parallel: threads > 1, ..NdConfig::default() };
            Ok(nested_dissection_order_with(graph, &coords, config)?.order)
        }
        (None, None) => Err(cch::Error::State("an order needs --coords or --order".into()).into()),
    }
}

pub fn preprocess(
    graph_path: &Path,
    coords: Option<&Path>,
    order: Option<&Path>,
    out: &Path,
    order_out: Option<&Path>,
    threads: usize,
) -> Result<()> {
    let graph = load_graph(graph_path)?;
    let clock = Instant::now();
    let order = obtain_order(&graph, coords, order, threads)?;
    let ordering = clock.elapsed();
    let clock = Instant::now();
    let cch = Cch::new(&graph, &order)?;
    let contraction = clock.elapsed();
    save_cch(&cch, out).with_context(|| format!("writing {}", out.display()))?;
    if let Some(path) = order_out {
        let file = File::create(path).with_context(|| format!("writing {}", path.display()))?;
        write_order(cch.order(), BufWriter::new(file))?;
    }

    println!("vertices        {}", cch.num_nodes());
    println!("input edges     {}", graph.topology().num_edges());
    println!("augmented arcs  {}", cch.num_arcs());
    println!("shortcuts       {}", cch.num_shortcuts(&graph));
    println!("tree height     {}", cch.tree().height());
    println!("ordering        {:.1} ms", millis(ordering));
    println!("contraction     {:.1} ms", millis(contraction));
    Ok(())
}

pub fn customize(cch_path: &Path, weights: &Path, out: &Path, perfect: bool, threads: usize) -> Result<()> {
    let cch = load_cch(cch_path).with_context(|| format!("reading {}", cch_path.display()))?;
    let graph = load_graph(weights)?;
    let (customized, timings) = run_customize(&cch, &graph, CustomizeOptions::new(perfect, threads))?;
    save_customized(&cch, &customized, out).with_context(|| format!("writing {}", out.display()))?;

    println!("threads    {threads}");
    println!("mode       {}", if perfect { "perfect" } else { "basic" });
    println!("respect    {:.2} ms", millis(timings.respect));
    println!("basic      {:.2} ms", millis(timings.basic));
    println!("perfect    {:.2} ms", millis(timings.perfect));
    println!("construct  {:.2} ms", millis(timings.construct));
    println!("total      {:.2} ms", millis(timings.total()));
    println!(
        "search     {} forward, {} backward arcs",
        customized.graphs.forward.num_arcs(),
        customized.graphs.backward.num_arcs()
    );
    Ok(())
}

fn parse_id(tok: &str, line: usize, n: usize) -> cch::Result<NodeId> {
    let id: u64 = tok.parse().map_err(|_| cch::Error::Parse { line, msg: format!("invalid vertex id `{tok}`") })?;
    if id >= n as u64 {
        return Err(cch::Error::Range { line, id, min: 0, max: (n as u64).saturating_sub(1) });
    }
    Ok(id as NodeId)
}

/// Non-empty, non-comment lines split into whitespace tokens, with 1-based line numbers.
fn records(path: &Path) -> Result<Vec<(usize, Vec<String>)>> {
    let file = File::open(path).map_err(cch::Error::from).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(cch::Error::from)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push((i + 1, trimmed.split_whitespace().map(str::to_owned).collect()));
    }
    Ok(out)
}

/// `s t` pairs, 0-based.
pub fn read_pairs(path: &Path, n: usize) -> Result<Vec<(NodeId, NodeId)>> {
    let mut pairs = Vec::new();
    for (line, toks) in records(path)? {
        if toks.len() != 2 {
            let msg = format!("expected `s t`, found {} fields", toks.len());
            return Err(anyhow::Error::from(cch::Error::Parse { line, msg })).context(path.display().to_string());
        }
        let s = parse_id(&toks[0], line, n).with_context(|| path.display().to_string())?;
        let t = parse_id(&toks[1], line, n).with_context(|| path.display().to_string())?;
        pairs.push((s, t));
    }
    Ok(pairs)
}

/// One 0-based vertex per line.
pub fn read_ids(path: &Path, n: usize) -> Result<Vec<NodeId>> {
    let mut ids = Vec::new();
    for (line, toks) in records(path)? {
        if toks.len() != 1 {
            let msg = format!("expected one vertex id, found {} fields", toks.len());
            return Err(anyhow::Error::from(cch::Error::Parse { line, msg })).context(path.display().to_string());
        }
        ids.push(parse_id(&toks[0], line, n).with_context(|| path.display().to_string())?);
    }
    Ok(ids)
}

pub fn format_distance(d: Weight) -> String {
    if d == INFINITY {
        "inf".into()
    } else {
        d.to_string()
    }
}

pub fn query(customized: &Path, batch: &Path, paths: bool) -> Result<()> {
    let (cch, c) = load_customized(customized).with_context(|| format!("reading {}", customized.display()))?;
    let pairs = read_pairs(batch, cch.num_nodes())?;
    let mut q = Query::new(&cch, &c);
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for (s, t) in pairs {
        let r = q.query(s, t);
        write!(out, "{s}\t{t}\t{}", format_distance(r.distance))?;
        if paths {
            let walk = if r.distance == INFINITY {
                String::new()
            } else {
                q.path()?.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            };
            write!(out, "\t{walk}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn knn(
    customized: &Path,
    sources: &Path,
    targets: &Path,
    k: usize,
    algo: KnnAlgo,
    graph: Option<&Path>,
) -> Result<()> {
    let (cch, c) = load_customized(customized).with_context(|| format!("reading {}", customized.display()))?;
    let n = cch.num_nodes();
    let sources = read_ids(sources, n)?;
    let targets = read_ids(targets, n)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut emit = |s: NodeId, found: Vec<(NodeId, Weight)>| -> io::Result<()> {
        for (i, (t, d)) in found.into_iter().enumerate() {
            writeln!(out, "{s}\t{}\t{t}\t{d}", i + 1)?;
        }
        Ok(())
    };
    match algo {
        KnnAlgo::Sep => {
            let poi = knn_select(&cch, &targets)?;
            let mut rphast = LazyRphast::one_to_many(&cch, &c);
            for s in sources {
                rphast.select(s);
                emit(s, knn_query(&mut rphast, &poi, k)?)?;
            }
        }
        KnnAlgo::Dijkstra => {
            let path = graph.expect("clap requires --graph for dijkstra");
            let g = load_graph(path)?;
            if g.num_nodes() != n {
                let msg = format!("graph has {} vertices, artifact has {n}", g.num_nodes());
                return Err(cch::Error::Consistency(msg).into());
            }
            for s in sources {
                emit(s, knn_dijkstra(&g, s, k, &targets))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
