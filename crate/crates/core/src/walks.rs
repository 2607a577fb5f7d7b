//! Random walks, loop-erased random walks and Wilson's algorithm.
//!
//! Every walk step consumes exactly one draw from the stream: a uniform
//! incidence of the current vertex, so parallel edges are weighted by
//! multiplicity.

use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dual::{compute_dual, DualGraph};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::graph::Graph;
use crate::planar::PlanarEmbedding;
use crate::rng::RngStream;
use crate::tree::{SpanningTree, TreeEdge};

/// Per-walk step limit; a walk that reaches it is treated as stuck.
pub const STEP_BUDGET: u64 = 1_000_000_000;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrace {
    /// Every vertex visited, starting with the start vertex.
    pub raw: Vec<usize>,
    /// The loop-erased path from the start to the absorbing vertex.
    pub path: Vec<usize>,
    pub steps: u64,
}

/// Walks from `start` until it first hits `absorb`, erasing each loop as it
/// closes.
pub fn loop_erased_walk(g: &Graph, start: usize, absorb: &[usize], rng: &mut RngStream) -> Result<WalkTrace> {
    let n = g.num_vertices();
    if start >= n || absorb.iter().any(|&v| v >= n) {
        return Err(Error::InvalidParameter("walk vertex out of range".into()));
    }
    if absorb.is_empty() {
        return Err(Error::InvalidParameter("empty absorbing set".into()));
    }
    let mut absorbing = vec![false; n];
    for &v in absorb {
        absorbing[v] = true;
    }
    let mut raw = vec![start];
    let mut path = vec![start];
    let mut pos = vec![NONE; n];
    pos[start] = 0;
    let mut u = start;
    let mut steps = 0u64;
    while !absorbing[u] {
        if steps == STEP_BUDGET {
            return Err(Error::StepBudgetExceeded { start, budget: STEP_BUDGET });
        }
        let nb = g.neighbors(u);
        if nb.is_empty() {
            return Err(Error::StepBudgetExceeded { start, budget: steps });
        }
        u = nb[rng.index(nb.len())].vertex as usize;
        steps += 1;
        raw.push(u);
        if pos[u] != NONE {
            for &w in &path[pos[u] + 1..] {
                pos[w] = NONE;
            }
            path.truncate(pos[u] + 1);
        } else {
            pos[u] = path.len();
            path.push(u);
        }
    }
    Ok(WalkTrace { raw, path, steps })
}

#[derive(Debug, Clone)]
pub struct WilsonSample {
    pub tree: SpanningTree,
    /// Total random-walk steps across all loop-erased walks.
    pub steps: u64,
}

/// Reusable state for Wilson's algorithm on one graph.
///
/// Loop erasure is done by cycle popping: each vertex remembers the edge it
/// last left by, and retracing those pointers from the start gives the
/// loop-erased path.
#[derive(Debug, Clone)]
pub(crate) struct WilsonState {
    in_tree: Vec<bool>,
    next: Vec<(u32, u32)>,
    edge_in_tree: Vec<bool>,
    added: Vec<usize>,
}

impl WilsonState {
    pub(crate) fn new(g: &Graph) -> Self {
        WilsonState {
            in_tree: vec![false; g.num_vertices()],
            next: vec![(0, 0); g.num_vertices()],
            edge_in_tree: vec![false; g.num_edges()],
            added: Vec::with_capacity(g.num_vertices()),
        }
    }

    pub(crate) fn reset(&mut self, root: usize) {
        self.in_tree.fill(false);
        self.edge_in_tree.fill(false);
        self.added.clear();
        self.in_tree[root] = true;
        self.added.push(root);
    }

    pub(crate) fn contains(&self, v: usize) -> bool {
        self.in_tree[v]
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.added.len() == self.in_tree.len()
    }

    /// Tree edges as flags indexed by edge id.
    pub(crate) fn edge_flags(&self) -> &[bool] {
        &self.edge_in_tree
    }

    /// Runs one loop-erased walk from `start` into the current tree and adds
    /// it. Returns the hit vertex and the step count; `start` in the tree is a
    /// no-op.
    pub(crate) fn walk_from(&mut self, g: &Graph, start: usize, rng: &mut RngStream) -> Result<(usize, u64)> {
        let mut steps = 0u64;
        let mut u = start;
        while !self.in_tree[u] {
            if steps == STEP_BUDGET {
                return Err(Error::StepBudgetExceeded { start, budget: STEP_BUDGET });
            }
            let nb = g.neighbors(u);
            if nb.is_empty() {
                return Err(Error::Disconnected);
            }
            let inc = nb[rng.index(nb.len())];
            self.next[u] = (inc.vertex, inc.edge);
            u = inc.vertex as usize;
            steps += 1;
        }
        let hit = u;
        let mut u = start;
        while !self.in_tree[u] {
            self.in_tree[u] = true;
            self.added.push(u);
            let (w, e) = self.next[u];
            self.edge_in_tree[e as usize] = true;
            u = w as usize;
        }
        Ok((hit, steps))
    }

    /// Runs walks from `starts` then from every remaining vertex in ascending
    /// id order.
    pub(crate) fn complete(&mut self, g: &Graph, starts: &[usize], rng: &mut RngStream) -> Result<u64> {
        let mut steps = 0;
        for &s in starts {
            steps += self.walk_from(g, s, rng)?.1;
        }
        for s in 0..g.num_vertices() {
            if self.is_complete() {
                break;
            }
            steps += self.walk_from(g, s, rng)?.1;
        }
        Ok(steps)
    }

    fn tree(&self, g: &Graph) -> SpanningTree {
        let edges = (0..g.num_edges())
            .filter(|&e| self.edge_in_tree[e])
            .map(|id| {
                let (u, v) = g.endpoints(id);
                TreeEdge { id, u, v }
            })
            .collect();
        SpanningTree::from_sorted_unchecked(g.num_vertices(), edges)
    }
}

fn check_vertices(g: &Graph, vs: impl IntoIterator<Item = usize>) -> Result<()> {
    for v in vs {
        if v >= g.num_vertices() {
            return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
        }
    }
    Ok(())
}

/// Uniform spanning tree of `g` by Wilson's algorithm rooted at `root`.
///
/// Walks start from `starts` in order (skipping vertices already in the
/// tree), then from the remaining vertices in ascending id order.
pub fn wilson(g: &Graph, root: usize, starts: &[usize], rng: &mut RngStream) -> Result<WilsonSample> {
    check_vertices(g, starts.iter().copied().chain([root]))?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut state = WilsonState::new(g);
    state.reset(root);
    let steps = state.complete(g, starts, rng)?;
    Ok(WilsonSample { tree: state.tree(g), steps })
}

/// Samples uniform spanning trees of a primal graph through its dual rooted
/// at the outer face, reusing buffers between samples.
#[derive(Debug, Clone)]
pub struct DualWilson<'a> {
    dual: &'a DualGraph,
    state: WilsonState,
}

impl<'a> DualWilson<'a> {
    pub fn new(dual: &'a DualGraph) -> Self {
        DualWilson { dual, state: WilsonState::new(dual.graph()) }
    }

    pub fn dual(&self) -> &DualGraph {
        self.dual
    }

    /// One primal spanning tree; `starts` are dual vertices.
    pub fn sample(&mut self, starts: &[usize], rng: &mut RngStream) -> Result<WilsonSample> {
        check_vertices(self.dual.graph(), starts.iter().copied())?;
        self.state.reset(self.dual.root());
        let steps = self.state.complete(self.dual.graph(), starts, rng)?;
        Ok(WilsonSample { tree: self.dual.primal_tree_from_flags(self.state.edge_flags()), steps })
    }

    /// Dual-tree edge flags of the last sample, indexed by edge id.
    pub fn dual_edge_flags(&self) -> &[bool] {
        self.state.edge_flags()
    }
}

/// Uniform spanning tree of `g` sampled on its dual rooted at the outer face.
pub fn wilson_on_dual(g: &PlanarEmbedding, starts: &[usize], rng: &mut RngStream) -> Result<WilsonSample> {
    let dual = compute_dual(g, false)?;
    DualWilson::new(&dual).sample(starts, rng)
}

/// Vertex predicate over a dual vertex id and its location (`None` for the
/// root).
pub type Tube = Arc<dyn Fn(usize, Option<Point>) -> bool + Send + Sync>;

#[derive(Debug, Clone, PartialEq)]
pub enum SourceRule {
    Vertex(usize),
    /// The non-root dual vertex whose position is closest to the point.
    NearestTo(Point),
    /// A uniformly random neighbor of the lowest-id anchor already in the
    /// tree.
    AdjacentToTree(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// The listed vertices that are in the tree when the phase starts.
    Vertices(Vec<usize>),
    WholeTree,
}

#[derive(Clone)]
pub struct Phase {
    pub source: SourceRule,
    pub target: Target,
    pub tube: Option<Tube>,
}

impl std::fmt::Debug for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Phase")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("tube", &self.tube.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, Default)]
pub struct PhasePlan {
    pub phases: Vec<Phase>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseOutcome {
    pub target_hit: bool,
    /// Every vertex the phase's walk visited satisfied the tube predicate.
    pub stayed_in_tube: bool,
    pub steps: u64,
}

/// One loop-erased walk, as written to a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub phase: usize,
    pub start: usize,
    pub end: usize,
    pub raw_len: u64,
    pub erased_len: usize,
}

#[derive(Debug, Clone)]
pub struct PhasedReport {
    pub phases: Vec<PhaseOutcome>,
    /// Starts of the loop-erased walks made during the plan, in order.
    pub induced_starts: Vec<usize>,
    /// Walks made during the plan; completion walks carry the phase index
    /// `phases.len()`.
    pub walks: Vec<WalkRecord>,
    pub steps: u64,
}

/// Writes walk records as JSON lines.
pub fn write_trace(records: &[WalkRecord], mut out: impl Write) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    Ok(())
}

const AUX_TAG: u64 = 0x5048_4153_4544;

/// Wilson's algorithm on a dual with its starts chosen by `plan`.
///
/// A phase begins at its source. From outside the tree it does a loop-erased
/// walk into the tree and ends if that walk hits the target; otherwise, and
/// whenever the source is already in the tree, a plain walk moves through the
/// tree until it leaves it and the phase continues from there. Plain walks
/// and random source choices draw from a stream derived from `rng`, so the
/// loop-erased walks consume `rng` exactly as [`wilson`] does when given
/// `induced_starts`. After the plan, the tree is completed in ascending id
/// order.
pub fn wilson_phased(dual: &DualGraph, plan: &PhasePlan, rng: &mut RngStream) -> Result<(SpanningTree, PhasedReport)> {
    let g = dual.graph();
    let mut aux = rng.derive(AUX_TAG);
    let mut state = WilsonState::new(g);
    state.reset(dual.root());
    let mut report = PhasedReport { phases: Vec::new(), induced_starts: Vec::new(), walks: Vec::new(), steps: 0 };
    let mut is_target = vec![false; g.num_vertices()];

    for (pi, phase) in plan.phases.iter().enumerate() {
        is_target.fill(false);
        let mut any = false;
        match &phase.target {
            Target::WholeTree => {
                for (v, t) in is_target.iter_mut().enumerate() {
                    *t = state.contains(v);
                }
                any = true;
            }
            Target::Vertices(vs) => {
                check_vertices(g, vs.iter().copied())?;
                for &v in vs {
                    if state.contains(v) {
                        is_target[v] = true;
                        any = true;
                    }
                }
            }
        }
        if !any {
            return Err(Error::InvalidPlan { phase: pi, reason: "target is empty at phase start".into() });
        }
        let in_tube = |v: usize| phase.tube.as_ref().is_none_or(|t| t(v, dual.position(v)));
        let mut source = resolve_source(dual, &phase.source, &state, &mut aux, pi)?;
        let mut outcome = PhaseOutcome { target_hit: false, stayed_in_tube: in_tube(source), steps: 0 };

        loop {
            if state.is_complete() {
                break;
            }
            if state.contains(source) {
                // Case (b): plain walk until the walk leaves the tree.
                let mut u = source;
                let mut n = 0u64;
                while state.contains(u) {
                    if n == STEP_BUDGET {
                        return Err(Error::StepBudgetExceeded { start: source, budget: STEP_BUDGET });
                    }
                    let nb = g.neighbors(u);
                    u = nb[aux.index(nb.len())].vertex as usize;
                    n += 1;
                    outcome.stayed_in_tube &= in_tube(u);
                }
                outcome.steps += n;
                source = u;
                continue;
            }
            // Case (a): loop-erased walk into the tree.
            if phase.tube.is_some() {
                outcome.stayed_in_tube &= walk_in_tube(g, &state, source, rng, &in_tube);
            }
            let before = state.added.len();
            let (hit, n) = state.walk_from(g, source, rng)?;
            outcome.steps += n;
            report.induced_starts.push(source);
            report.walks.push(WalkRecord {
                phase: pi,
                start: source,
                end: hit,
                raw_len: n,
                erased_len: state.added.len() - before,
            });
            if is_target[hit] {
                outcome.target_hit = true;
                break;
            }
            source = hit;
        }
        report.steps += outcome.steps;
        report.phases.push(outcome);
    }

    let done = plan.phases.len();
    for s in 0..g.num_vertices() {
        if state.is_complete() {
            break;
        }
        if state.contains(s) {
            continue;
        }
        let before = state.added.len();
        let (hit, n) = state.walk_from(g, s, rng)?;
        report.steps += n;
        report.walks.push(WalkRecord {
            phase: done,
            start: s,
            end: hit,
            raw_len: n,
            erased_len: state.added.len() - before,
        });
    }
    Ok((state.tree(g), report))
}

/// Replays the loop-erased walk `walk_from` is about to make, on a clone of
/// the stream, and checks every visited vertex against the tube.
fn walk_in_tube(
    g: &Graph,
    state: &WilsonState,
    start: usize,
    rng: &RngStream,
    in_tube: &dyn Fn(usize) -> bool,
) -> bool {
    let mut rng = rng.clone();
    let mut u = start;
    let mut ok = in_tube(u);
    let mut n = 0u64;
    while !state.contains(u) && n < STEP_BUDGET {
        let nb = g.neighbors(u);
        u = nb[rng.index(nb.len())].vertex as usize;
        ok &= in_tube(u);
        n += 1;
    }
    ok
}

fn resolve_source(
    dual: &DualGraph,
    rule: &SourceRule,
    state: &WilsonState,
    aux: &mut RngStream,
    phase: usize,
) -> Result<usize> {
    let g = dual.graph();
    match rule {
        SourceRule::Vertex(v) => {
            check_vertices(g, [*v])?;
            Ok(*v)
        }
        SourceRule::NearestTo(p) => (0..g.num_vertices())
            .filter_map(|v| dual.position(v).map(|q| (q.dist(*p), v)))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, v)| v)
            .ok_or_else(|| Error::InvalidPlan { phase, reason: "no positioned dual vertex".into() }),
        SourceRule::AdjacentToTree(anchors) => {
            check_vertices(g, anchors.iter().copied())?;
            let anchor = anchors
                .iter()
                .copied()
                .filter(|&v| state.contains(v))
                .min()
                .ok_or_else(|| Error::InvalidPlan { phase, reason: "no anchor is in the tree".into() })?;
            let nb = g.neighbors(anchor);
            Ok(nb[aux.index(nb.len())].vertex as usize)
        }
    }
}
