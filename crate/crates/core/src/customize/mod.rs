//! Metric customization: respecting the input weights, basic customization
//! (lower triangles), perfect customization (upper and intermediate
//! triangles) with deletion marks, and the reduced search graphs.

mod io;
mod reduced;
mod shared;

use std::cell::RefCell;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

pub use io::{load_customized, read_customized, save_customized, write_customized};
pub use reduced::{build_reduced, SearchGraph, SearchGraphs};

use crate::error::{Error, Result};
use crate::graph::{link, ArcId, InputGraph, NodeId, Weight, INFINITY, INVALID_ID};
use crate::preprocess::{Cch, UpwardGraph};
use shared::{bottom_up, top_down, with_pool, UnsafeSlice};

/// Unpacking witness of an arc `vw` (`v < w`): the arcs `uv` and `uw` of the
/// shortest lower triangle through `u`. The first is traversed against the
/// arc's direction, the second along it.
pub type Unpack = [ArcId; 2];

pub const NO_UNPACK: Unpack = [INVALID_ID, INVALID_ID];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Respected,
    Basic,
    Perfect,
}

/// Per upward arc `uv`: `up` is the weight of `u -> v`, `down` of `v -> u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CustomizedMetric {
    pub up: Vec<Weight>,
    pub down: Vec<Weight>,
    pub unpack_up: Vec<Unpack>,
    pub unpack_down: Vec<Unpack>,
    pub delete_up: Vec<u8>,
    pub delete_down: Vec<u8>,
    stage: Stage,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PerfectStats {
    /// Arc directions whose weight dropped in this run.
    pub decreased: usize,
}

impl CustomizedMetric {
    /// Every arc at `INFINITY`, nothing customized.
    pub fn unweighted(m: usize) -> Self {
        CustomizedMetric {
            up: vec![INFINITY; m],
            down: vec![INFINITY; m],
            unpack_up: vec![NO_UNPACK; m],
            unpack_down: vec![NO_UNPACK; m],
            delete_up: vec![0; m],
            delete_down: vec![0; m],
            stage: Stage::Respected,
        }
    }

    pub(crate) fn from_parts(
        up: Vec<Weight>,
        down: Vec<Weight>,
        unpack_up: Vec<Unpack>,
        unpack_down: Vec<Unpack>,
        delete_up: Vec<u8>,
        delete_down: Vec<u8>,
        stage: Stage,
    ) -> Self {
        CustomizedMetric { up, down, unpack_up, unpack_down, delete_up, delete_down, stage }
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn num_arcs(&self) -> usize {
        self.up.len()
    }

    fn shared(&mut self) -> Shared<'_> {
        Shared {
            up: UnsafeSlice::new(&mut self.up),
            down: UnsafeSlice::new(&mut self.down),
            unpack_up: UnsafeSlice::new(&mut self.unpack_up),
            unpack_down: UnsafeSlice::new(&mut self.unpack_down),
            delete_up: UnsafeSlice::new(&mut self.delete_up),
            delete_down: UnsafeSlice::new(&mut self.delete_down),
        }
    }
}

#[derive(Clone, Copy)]
struct Shared<'a> {
    up: UnsafeSlice<'a, Weight>,
    down: UnsafeSlice<'a, Weight>,
    unpack_up: UnsafeSlice<'a, Unpack>,
    unpack_down: UnsafeSlice<'a, Unpack>,
    delete_up: UnsafeSlice<'a, u8>,
    delete_down: UnsafeSlice<'a, u8>,
}

/// Copies the input weights of `graph` (original vertex IDs) onto the
/// augmented arcs. Shortcuts and absent directions stay at `INFINITY`.
pub fn respect(cch: &Cch, graph: &InputGraph) -> Result<CustomizedMetric> {
    if graph.num_nodes() != cch.num_nodes() {
        return Err(Error::consistency(format!(
            "metric graph has {} vertices, preprocessing has {}",
            graph.num_nodes(),
            cch.num_nodes()
        )));
    }
    let up_graph = cch.upward();
    let mut metric = CustomizedMetric::unweighted(up_graph.num_arcs());
    for (u, v, w) in graph.arcs() {
        let (ru, rv) = (cch.order().rank(u), cch.order().rank(v));
        let a = up_graph
            .find_arc(ru, rv)
            .ok_or_else(|| Error::consistency(format!("metric arc ({u}, {v}) is not an edge of the preprocessed graph")))?
            as usize;
        let slot = if ru < rv { &mut metric.up[a] } else { &mut metric.down[a] };
        *slot = (*slot).min(w);
    }
    Ok(metric)
}

fn require(metric: &CustomizedMetric, stage: Stage, what: &str) -> Result<()> {
    if metric.stage != stage {
        return Err(Error::state(format!("{what} needs a {stage:?} metric, found {:?}", metric.stage)));
    }
    Ok(())
}

fn check_size(metric: &CustomizedMetric, graph: &UpwardGraph) -> Result<()> {
    if metric.num_arcs() != graph.num_arcs() {
        return Err(Error::consistency("metric and upward graph differ in arc count"));
    }
    Ok(())
}

/// Sequential basic customization: every vertex relaxes the opposite arcs of
/// its upper triangles, found by one merge of its own neighborhood with its
/// neighbor's.
pub fn basic_sweep(metric: &mut CustomizedMetric, graph: &UpwardGraph) -> Result<()> {
    require(metric, Stage::Respected, "basic customization")?;
    check_size(metric, graph)?;
    let (up, down) = (&mut metric.up, &mut metric.down);
    let (unpack_up, unpack_down) = (&mut metric.unpack_up, &mut metric.unpack_down);
    let head = graph.heads();
    for u in 0..graph.num_nodes() as NodeId {
        let arcs = graph.arc_range(u);
        for uv in arcs.clone() {
            let v = head[uv];
            let mut vw = graph.arc_range(v).start;
            for uw in uv + 1..arcs.end {
                let w = head[uw];
                while head[vw] != w {
                    vw += 1;
                }
                let witness = [uv as ArcId, uw as ArcId];
                let via = link(down[uv], up[uw]);
                if via < up[vw] {
                    up[vw] = via;
                    unpack_up[vw] = witness;
                }
                let via = link(up[uv], down[uw]);
                if via < down[vw] {
                    down[vw] = via;
                    unpack_down[vw] = witness;
                }
            }
        }
    }
    metric.stage = Stage::Basic;
    Ok(())
}

thread_local! {
    static MARKS: RefCell<Vec<ArcId>> = const { RefCell::new(Vec::new()) };
}

/// Relaxes every arc `uv` over its lower triangles `(w, u, v)`.
///
/// # Safety
/// Writes only arcs with tail `u`; reads arcs with tails below `u` in its
/// subtree, which must be final.
unsafe fn relax_lower_batch(graph: &UpwardGraph, s: Shared<'_>, u: NodeId, marks: &mut [ArcId]) {
    let head = graph.heads();
    for a in graph.arc_range(u) {
        marks[head[a] as usize] = a as ArcId;
    }
    for &wu in graph.downward_arcs(u) {
        let w = graph.tail(wu);
        let (wu_up, wu_down) = (s.up.get(wu as usize), s.down.get(wu as usize));
        for wv in graph.arc_range(w).rev() {
            let v = head[wv];
            if v <= u {
                break;
            }
            let uv = marks[v as usize] as usize;
            debug_assert_eq!(graph.tail(uv as ArcId), u);
            let witness = [wu, wv as ArcId];
            let via = link(wu_down, s.up.get(wv));
            if via < s.up.get(uv) {
                s.up.set(uv, via);
                s.unpack_up.set(uv, witness);
            }
            let via = link(wu_up, s.down.get(wv));
            if via < s.down.get(uv) {
                s.down.set(uv, via);
                s.unpack_down.set(uv, witness);
            }
        }
    }
}

/// Tuning for the task-parallel phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParallelConfig {
    pub threads: usize,
    /// Cells below `n / (alpha * threads)` vertices are not split further.
    pub alpha: usize,
    /// Reduced graphs are built in `beta * threads` chunks.
    pub beta: usize,
}

impl ParallelConfig {
    pub fn new(threads: usize) -> Self {
        ParallelConfig { threads: threads.max(1), alpha: 32, beta: 4 }
    }

    fn threshold(&self, n: usize) -> usize {
        n / (self.alpha.max(1) * self.threads)
    }
}

/// Basic customization with batched triangles, one vertex at a time,
/// parallel over the separator decomposition bottom-up.
pub fn basic_batched(metric: &mut CustomizedMetric, cch: &Cch, config: ParallelConfig) -> Result<()> {
    require(metric, Stage::Respected, "basic customization")?;
    let graph = cch.upward();
    check_size(metric, graph)?;
    let n = graph.num_nodes();
    let shared = metric.shared();
    let process = |u: NodeId| {
        MARKS.with(|marks| {
            let mut marks = marks.borrow_mut();
            if marks.len() < n {
                marks.resize(n, INVALID_ID);
            }
            // SAFETY: the bottom-up traversal finishes a vertex's whole
            // subtree before the vertex, and only the vertex's own arcs are written.
            unsafe { relax_lower_batch(graph, shared, u, &mut marks) }
        })
    };
    if n > 0 {
        with_pool(config.threads, || bottom_up(cch.decomposition(), 0, config.threshold(n), &process));
    }
    metric.stage = Stage::Basic;
    Ok(())
}

/// # Safety
/// Writes only arcs with tail `u`; reads arcs between upward neighbors of `u`,
/// which must be final.
unsafe fn relax_upper(graph: &UpwardGraph, s: Shared<'_>, u: NodeId) -> usize {
    let head = graph.heads();
    let arcs = graph.arc_range(u);
    let mut decreased = 0;
    let mut lower = |slot: &UnsafeSlice<'_, Weight>, flag: &UnsafeSlice<'_, u8>, a: usize, via: Weight| {
        if via < slot.get(a) {
            slot.set(a, via);
            flag.set(a, 1);
            decreased += 1;
        }
    };
    for uv in arcs.clone() {
        let v = head[uv];
        let mut vw = graph.arc_range(v).start;
        for uw in uv + 1..arcs.end {
            let w = head[uw];
            while head[vw] != w {
                vw += 1;
            }
            let (vw_up, vw_down) = (s.up.get(vw), s.down.get(vw));
            lower(&s.up, &s.delete_up, uv, link(s.up.get(uw), vw_down));
            lower(&s.down, &s.delete_down, uv, link(s.down.get(uw), vw_up));
            lower(&s.up, &s.delete_up, uw, link(s.up.get(uv), vw_up));
            lower(&s.down, &s.delete_down, uw, link(s.down.get(uv), vw_down));
        }
    }
    decreased
}

/// Perfect customization top-down over the decomposition. Afterwards every
/// arc carries the exact distance between its endpoints; arc directions that
/// decreased are marked for deletion. Unpacking data is left untouched.
pub fn perfect(metric: &mut CustomizedMetric, cch: &Cch, config: ParallelConfig) -> Result<PerfectStats> {
    if metric.stage == Stage::Respected {
        return Err(Error::state("perfect customization requires basic customization first"));
    }
    let graph = cch.upward();
    check_size(metric, graph)?;
    let n = graph.num_nodes();
    let shared = metric.shared();
    let decreased = AtomicUsize::new(0);
    let process = |u: NodeId| {
        // SAFETY: the top-down traversal finishes all ancestors of a vertex
        // before it, and only the vertex's own arcs are written.
        let d = unsafe { relax_upper(graph, shared, u) };
        if d > 0 {
            decreased.fetch_add(d, Ordering::Relaxed);
        }
    };
    if n > 0 {
        with_pool(config.threads, || top_down(cch.decomposition(), 0, config.threshold(n), &process));
    }
    metric.stage = Stage::Perfect;
    Ok(PerfectStats { decreased: decreased.into_inner() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CustomizeOptions {
    pub perfect: bool,
    pub parallel: ParallelConfig,
}

impl CustomizeOptions {
    pub fn new(perfect: bool, threads: usize) -> Self {
        CustomizeOptions { perfect, parallel: ParallelConfig::new(threads) }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CustomizeTimings {
    pub respect: Duration,
    pub basic: Duration,
    pub perfect: Duration,
    pub construct: Duration,
}

impl CustomizeTimings {
    pub fn total(&self) -> Duration {
        self.respect + self.basic + self.perfect + self.construct
    }
}

/// A customized metric with the search graphs queries run on: the reduced
/// graphs after perfect customization, the whole augmented graph otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Customized {
    pub metric: CustomizedMetric,
    pub graphs: SearchGraphs,
}

impl Customized {
    /// Search graphs matching the metric's stage.
    pub fn from_metric(metric: CustomizedMetric, cch: &Cch, config: ParallelConfig) -> Result<Self> {
        let graphs = match metric.stage() {
            Stage::Respected => return Err(Error::state("metric has not been customized")),
            Stage::Basic => SearchGraphs::whole(cch.upward(), &metric),
            Stage::Perfect => build_reduced(&metric, cch.upward(), config),
        };
        Ok(Customized { metric, graphs })
    }

    pub fn is_perfect(&self) -> bool {
        self.metric.stage() == Stage::Perfect
    }
}

/// Respect, basic customization (sequential sweep for one thread, batched
/// otherwise), and optionally perfect customization with reduced graphs.
pub fn customize(cch: &Cch, graph: &InputGraph, options: CustomizeOptions) -> Result<(Customized, CustomizeTimings)> {
    let mut timings = CustomizeTimings::default();
    let clock = Instant::now();
    let mut metric = respect(cch, graph)?;
    timings.respect = clock.elapsed();

    let clock = Instant::now();
    if options.parallel.threads == 1 {
        basic_sweep(&mut metric, cch.upward())?;
    } else {
        basic_batched(&mut metric, cch, options.parallel)?;
    }
    timings.basic = clock.elapsed();

    if options.perfect {
        let clock = Instant::now();
        perfect(&mut metric, cch, options.parallel)?;
        timings.perfect = clock.elapsed();
    }

    let clock = Instant::now();
    let customized = Customized::from_metric(metric, cch, options.parallel)?;
    timings.construct = clock.elapsed();
    Ok((customized, timings))
}
