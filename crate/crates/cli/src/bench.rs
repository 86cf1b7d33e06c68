use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use cch::customize::{customize, CustomizeOptions};
use cch::graph::{dijkstra, NodeId, INFINITY};
use cch::preprocess::Cch;
use cch::query::Query;
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::{format_distance, load_graph, millis, obtain_order};
use crate::{OrderSource, ThreadArgs};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    source: OrderSource,
    /// Seed for the query generator.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of uniformly random queries.
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Query every ordered pair instead of `--count` random ones.
    #[arg(long)]
    all_pairs: bool,
    /// Check every distance against Dijkstra.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    no_perfect: bool,
    /// Write one JSON object per line: every query sample, then the report.
    #[arg(long)]
    json_out: Option<PathBuf>,
    #[command(flatten)]
    threads: ThreadArgs,
}

#[derive(Debug, Serialize)]
pub struct Phases {
    pub ordering_ms: f64,
    pub contraction_ms: f64,
    pub respect_ms: f64,
    pub basic_ms: f64,
    pub perfect_ms: f64,
    pub construct_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct QuerySummary {
    pub count: usize,
    pub mean_us: f64,
    pub median_us: f64,
    pub mean_visited_vertices: f64,
    pub mean_relaxed_arcs: f64,
    pub mean_path_vertices: f64,
    pub unreachable: usize,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub graph: String,
    pub vertices: usize,
    pub augmented_arcs: usize,
    pub threads: usize,
    pub seed: u64,
    pub perfect: bool,
    pub phases: Phases,
    pub queries: QuerySummary,
    /// Dijkstra disagreements, when verification ran.
    pub mismatches: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Sample {
    pub source: NodeId,
    pub target: NodeId,
    /// `None` when unreachable.
    pub distance: Option<u32>,
    pub time_ns: u64,
    pub visited_vertices: u64,
    pub relaxed_arcs: u64,
    pub path_vertices: usize,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Line<'a> {
    Sample(&'a Sample),
    Report(&'a BenchReport),
}

fn summarize(samples: &[Sample]) -> QuerySummary {
    let count = samples.len();
    let mean = |f: &dyn Fn(&Sample) -> f64| if count == 0 { 0.0 } else { samples.iter().map(f).sum::<f64>() / count as f64 };
    let mut times: Vec<u64> = samples.iter().map(|s| s.time_ns).collect();
    times.sort_unstable();
    let median_ns = match count {
        0 => 0.0,
        _ if count % 2 == 1 => times[count / 2] as f64,
        _ => (times[count / 2 - 1] + times[count / 2]) as f64 / 2.0,
    };
    QuerySummary {
        count,
        mean_us: mean(&|s| s.time_ns as f64) / 1e3,
        median_us: median_ns / 1e3,
        mean_visited_vertices: mean(&|s| s.visited_vertices as f64),
        mean_relaxed_arcs: mean(&|s| s.relaxed_arcs as f64),
        mean_path_vertices: mean(&|s| s.path_vertices as f64),
        unreachable: samples.iter().filter(|s| s.distance.is_none()).count(),
    }
}

pub fn run(args: &BenchArgs) -> Result<()> {
    let threads = args.threads.resolve();
    let graph = load_graph(&args.graph)?;
    let n = graph.num_nodes() as NodeId;

    let clock = Instant::now();
    let order = obtain_order(&graph, args.source.coords.as_deref(), args.source.order.as_deref(), threads)?;
    let ordering = clock.elapsed();
    let clock = Instant::now();
    let cch = Cch::new(&graph, &order)?;
    let contraction = clock.elapsed();
    let perfect = !args.no_perfect;
    let (customized, timings) = customize(&cch, &graph, CustomizeOptions::new(perfect, threads))?;

    let pairs: Vec<(NodeId, NodeId)> = if args.all_pairs {
        (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect()
    } else if n == 0 {
        Vec::new()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        (0..args.count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };

    let mut q = Query::new(&cch, &customized);
    let mut samples = Vec::with_capacity(pairs.len());
    for &(s, t) in &pairs {
        let clock = Instant::now();
        let r = q.query(s, t);
        let time_ns = clock.elapsed().as_nanos() as u64;
        let stats = q.stats();
        let path_vertices = if r.distance == INFINITY { 0 } else { q.path()?.len() };
        samples.push(Sample {
            source: s,
            target: t,
            distance: (r.distance != INFINITY).then_some(r.distance),
            time_ns,
            visited_vertices: stats.visited_vertices,
            relaxed_arcs: stats.relaxed_arcs,
            path_vertices,
        });
    }

    let mismatches = args.verify.then(|| {
        let mut cached: Option<(NodeId, Vec<u32>)> = None;
        let mut wrong = 0;
        for sample in &samples {
            if cached.as_ref().map(|c| c.0) != Some(sample.source) {
                cached = Some((sample.source, dijkstra(&graph, sample.source, None)));
            }
            let expect = cached.as_ref().unwrap().1[sample.target as usize];
            if sample.distance.unwrap_or(INFINITY) != expect {
                wrong += 1;
                eprintln!(
                    "mismatch {} -> {}: {} vs Dijkstra {}",
                    sample.source,
                    sample.target,
                    format_distance(sample.distance.unwrap_or(INFINITY)),
                    format_distance(expect)
                );
            }
        }
        wrong
    });

    let report = BenchReport {
        schema_version: SCHEMA_VERSION,
        graph: args.graph.display().to_string(),
        vertices: cch.num_nodes(),
        augmented_arcs: cch.num_arcs(),
        threads,
        seed: args.seed,
        perfect,
        phases: Phases {
            ordering_ms: millis(ordering),
            contraction_ms: millis(contraction),
            respect_ms: millis(timings.respect),
            basic_ms: millis(timings.basic),
            perfect_ms: millis(timings.perfect),
            construct_ms: millis(timings.construct),
        },
        queries: summarize(&samples),
        mismatches,
    };
    print_table(&report);

    if let Some(path) = &args.json_out {
        let file = File::create(path).map_err(cch::Error::from).with_context(|| format!("writing {}", path.display()))?;
        let mut out = BufWriter::new(file);
        for sample in &samples {
            serde_json::to_writer(&mut out, &Line::Sample(sample))?;
            writeln!(out)?;
        }
        serde_json::to_writer(&mut out, &Line::Report(&report))?;
        writeln!(out)?;
        out.flush()?;
    }

    if let Some(wrong) = mismatches.filter(|&w| w > 0) {
        bail!("{wrong} distances disagree with Dijkstra");
    }
    Ok(())
}

fn print_table(r: &BenchReport) {
    let p = &r.phases;
    let q = &r.queries;
    println!("graph             {} ({} vertices, {} augmented arcs)", r.graph, r.vertices, r.augmented_arcs);
    println!("threads           {}", r.threads);
    println!("seed              {}", r.seed);
    println!("mode              {}", if r.perfect { "perfect" } else { "basic" });
    println!("ordering          {:>12.2} ms", p.ordering_ms);
    println!("contraction       {:>12.2} ms", p.contraction_ms);
    println!("respect           {:>12.2} ms", p.respect_ms);
    println!("basic             {:>12.2} ms", p.basic_ms);
    println!("perfect           {:>12.2} ms", p.perfect_ms);
    println!("construct         {:>12.2} ms", p.construct_ms);
    println!("queries           {:>12}", q.count);
    println!("mean time         {:>12.2} us", q.mean_us);
    println!("median time       {:>12.2} us", q.median_us);
    println!("visited vertices  {:>12.1}", q.mean_visited_vertices);
    println!("relaxed arcs      {:>12.1}", q.mean_relaxed_arcs);
    println!("path vertices     {:>12.1}", q.mean_path_vertices);
    println!("unreachable       {:>12}", q.unreachable);
    if let Some(m) = r.mismatches {
        println!("mismatches        {m:>12}");
    }
}
