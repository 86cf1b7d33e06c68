mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cch", version, about = "Customizable contraction hierarchies: preprocess, customize, query")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
pub struct ThreadArgs {
    /// Worker threads; defaults to the available hardware parallelism.
    #[arg(long, env = "CCH_THREADS")]
    threads: Option<usize>,
}

impl ThreadArgs {
    pub fn resolve(self) -> usize {
        let hardware = std::thread::available_parallelism().map_or(1, |n| n.get());
        self.threads.unwrap_or(hardware).max(1)
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct OrderSource {
    /// DIMACS `.co` coordinates; the order is computed by nested dissection.
    #[arg(long)]
    coords: Option<PathBuf>,
    /// Order file: one vertex per line, listed by ascending rank.
    #[arg(long)]
    order: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Order, contract and write a preprocessing artifact.
    Preprocess {
        /// DIMACS `.gr` graph.
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        source: OrderSource,
        #[arg(long)]
        out: PathBuf,
        /// Also write the final (post-order) vertex order here.
        #[arg(long)]
        order_out: Option<PathBuf>,
        #[command(flatten)]
        threads: ThreadArgs,
    },
    /// Apply a metric to a preprocessing artifact.
    Customize {
        /// Preprocessing artifact.
        #[arg(long)]
        cch: PathBuf,
        /// DIMACS `.gr` with the metric; its arcs must be edges of the preprocessed graph.
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Stop after basic customization and search the full upward graph.
        #[arg(long)]
        no_perfect: bool,
        #[command(flatten)]
        threads: ThreadArgs,
    },
    /// Answer a batch of `s t` lines (0-based) as TSV on standard output.
    Query {
        /// Customized artifact.
        #[arg(long)]
        customized: PathBuf,
        #[arg(long)]
        batch: PathBuf,
        /// Append the unpacked vertex path as a fourth column.
        #[arg(long)]
        paths: bool,
    },
    /// k nearest targets for every source.
    Knn {
        #[arg(long)]
        customized: PathBuf,
        /// One 0-based source per line.
        #[arg(long)]
        sources: PathBuf,
        /// One 0-based target per line.
        #[arg(long)]
        targets: PathBuf,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, value_enum, default_value_t = KnnAlgo::Sep)]
        algo: KnnAlgo,
        /// Input graph with the customized metric, required by `--algo dijkstra`.
        #[arg(long, required_if_eq("algo", "dijkstra"))]
        graph: Option<PathBuf>,
    },
    /// Run the whole pipeline and random queries, then report timings.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KnnAlgo {
    Sep,
    Dijkstra,
}

/// Exit status per error class.
fn exit_code(err: &anyhow::Error) -> u8 {
    use cch::Error;
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Io(_)) => 3,
        Some(Error::Parse { .. } | Error::Range { .. }) => 4,
        Some(Error::Consistency(_) | Error::Format(_)) => 5,
        Some(Error::State(_) | Error::ContractViolation(_)) => 6,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Preprocess { graph, source, out, order_out, threads } => {
            commands::preprocess(&graph, source.coords.as_deref(), source.order.as_deref(), &out, order_out.as_deref(), threads.resolve())
        }
        Command::Customize { cch, weights, out, no_perfect, threads } => {
            commands::customize(&cch, &weights, &out, !no_perfect, threads.resolve())
        }
        Command::Query { customized, batch, paths } => commands::query(&customized, &batch, paths),
        Command::Knn { customized, sources, targets, k, algo, graph } => {
            commands::knn(&customized, &sources, &targets, k, algo, graph.as_deref())
        }
        Command::Bench(args) => bench::run(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
