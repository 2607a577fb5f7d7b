//! Samplers for balanced partitions under the spanning tree distribution:
//! an exact rejection sampler and an up-down walk on k-forests.

use std::time::Instant;

use num_bigint::RandBigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::count::count_spanning_trees;
use crate::dual::{compute_dual, DualGraph};
use crate::error::{Error, Result};
use crate::forest::{DynamicForest, KForest, LinkCutForest};
use crate::graph::{DisjointSets, Graph};
use crate::partition::{contract_partition, Partition};
use crate::planar::PlanarEmbedding;
use crate::rng::RngStream;
use crate::splitting::{balanced_cut, find_min_imbalance_split};
use crate::tree::SpanningTree;
use crate::walks::{wilson, DualWilson};

/// Default limit on rounds per accepted sample.
pub const DEFAULT_ROUND_CAP: u64 = 100_000_000;

/// Default up-down steps per round, as a multiple of `M ln M`.
pub const DEFAULT_MIXING_MULTIPLIER: f64 = 10.0;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SamplerReport {
    pub seed: u64,
    pub rounds_attempted: u64,
    pub accepted: u64,
    /// Spanning trees drawn (exact sampler).
    pub trees_sampled: u64,
    /// Up-down steps taken (walk sampler).
    pub steps_taken: u64,
    pub rejected_not_splittable: u64,
    pub rejected_final_coin: u64,
    pub rejected_not_balanced: u64,
    /// The walk ran with zero steps per round, so it never mixed.
    pub degenerate_mixing: bool,
    pub wall_clock_secs: f64,
}

impl SamplerReport {
    fn new(seed: u64) -> Self {
        SamplerReport { seed, ..Default::default() }
    }

    pub fn rejected(&self) -> u64 {
        self.rejected_not_splittable + self.rejected_final_coin + self.rejected_not_balanced
    }

    /// Rounds whose tree had a balanced split, whether or not it was kept.
    pub fn splittable_rounds(&self) -> u64 {
        self.rounds_attempted - self.rejected_not_splittable
    }

    /// Adds another report's counts; the seed of `self` is kept.
    pub fn merge(&mut self, other: &SamplerReport) {
        self.rounds_attempted += other.rounds_attempted;
        self.accepted += other.accepted;
        self.trees_sampled += other.trees_sampled;
        self.steps_taken += other.steps_taken;
        self.rejected_not_splittable += other.rejected_not_splittable;
        self.rejected_final_coin += other.rejected_final_coin;
        self.rejected_not_balanced += other.rejected_not_balanced;
        self.degenerate_mixing |= other.degenerate_mixing;
        self.wall_clock_secs += other.wall_clock_secs;
    }
}

fn check_divisible(g: &Graph, k: usize) -> Result<()> {
    let n = g.num_vertices();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if !n.is_multiple_of(k) {
        return Err(Error::NotDivisible { k, n });
    }
    Ok(())
}

/// Partition given by the components of `t` minus `cut`.
fn partition_from_cut(g: &Graph, t: &SpanningTree, cut: &[usize]) -> Result<Partition> {
    let mut ds = DisjointSets::new(g.num_vertices());
    for e in t.edges() {
        if !cut.contains(&e.id) {
            ds.union(e.u, e.v);
        }
    }
    let mut label = vec![usize::MAX; g.num_vertices()];
    let mut next = 0;
    let mut labels = Vec::with_capacity(g.num_vertices());
    for v in 0..g.num_vertices() {
        let r = ds.find(v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        labels.push(label[r]);
    }
    Partition::from_labels(g, &labels)
}

/// Exact sampler for balanced `k`-partitions drawn proportionally to the
/// product of the classes' spanning tree counts.
///
/// Each round draws a uniform spanning tree through the dual, rejects it if
/// it has no balanced split, and otherwise keeps the split's partition `P`
/// with probability exactly `1 / sp(G/P)`.
#[derive(Debug, Clone)]
pub struct PerfectSampler<'a> {
    g: &'a PlanarEmbedding,
    k: usize,
    dual: DualGraph,
    round_cap: u64,
}

impl<'a> PerfectSampler<'a> {
    pub fn new(g: &'a PlanarEmbedding, k: usize) -> Result<Self> {
        check_divisible(g.graph(), k)?;
        let dual = compute_dual(g, false)?;
        Ok(PerfectSampler { g, k, dual, round_cap: DEFAULT_ROUND_CAP })
    }

    pub fn with_round_cap(mut self, cap: u64) -> Self {
        self.round_cap = cap;
        self
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<(Partition, SamplerReport)> {
        let clock = Instant::now();
        let graph = self.g.graph();
        let part = graph.num_vertices() / self.k;
        let mut report = SamplerReport::new(rng.seed());
        let mut walker = DualWilson::new(&self.dual);
        loop {
            if report.rounds_attempted == self.round_cap {
                return Err(Error::RoundCapExceeded {
                    rounds: self.round_cap,
                    detail: format!("{} splittable trees, none accepted", report.splittable_rounds()),
                });
            }
            report.rounds_attempted += 1;
            report.trees_sampled += 1;
            let tree = walker.sample(&[], rng)?.tree;
            let Some(cut) = balanced_cut(&tree.rooted(0), &tree, part) else {
                report.rejected_not_splittable += 1;
                continue;
            };
            let p = partition_from_cut(graph, &tree, &cut)?;
            let s = count_spanning_trees(&contract_partition(graph, &p)?.graph);
            if rng.gen_biguint_below(&s).is_zero() {
                report.accepted += 1;
                report.wall_clock_secs = clock.elapsed().as_secs_f64();
                return Ok((p, report));
            }
            report.rejected_final_coin += 1;
        }
    }
}

/// One exact sample; see [`PerfectSampler`].
pub fn perfect_balanced_sample(
    g: &PlanarEmbedding,
    k: usize,
    rng: &mut RngStream,
) -> Result<(Partition, SamplerReport)> {
    PerfectSampler::new(g, k)?.sample(rng)
}

/// What one up-down step did. `added == removed` means the forest did not
/// change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpDownMove {
    pub added: usize,
    pub removed: usize,
}

/// One step of the up-down walk on k-forests.
///
/// Adds a uniform edge `e` outside the forest. If `e` closes a cycle, a
/// uniform edge of that cycle (possibly `e`) is removed; otherwise a uniform
/// edge of `F + e` (possibly `e`) is removed.
pub fn updown_step<D: DynamicForest>(f: &mut KForest, df: &mut D, rng: &mut RngStream) -> Result<UpDownMove> {
    if f.non_edges().is_empty() {
        return Err(Error::ForestPrecondition("every host edge is already in the forest".into()));
    }
    let e = f.non_edges()[rng.index(f.non_edges().len())];
    let (u, v) = f.host().endpoints(e);
    let removed = match df.path_len(u, v) {
        Some(len) => {
            let i = rng.index(len + 1);
            if i == len {
                e
            } else {
                df.path_edge_at(u, v, i).expect("path exists")
            }
        }
        None => {
            let m = f.edges().len();
            let i = rng.index(m + 1);
            if i == m {
                e
            } else {
                f.edges()[i]
            }
        }
    };
    if removed != e {
        df.cut(removed)?;
        df.link(u, v, e)?;
        f.exchange(e, removed);
    }
    Ok(UpDownMove { added: e, removed })
}

/// Approximate sampler: rounds of the up-down walk, returning the first
/// balanced forest seen at the end of a round. The walk continues from the
/// current forest across calls.
#[derive(Debug, Clone)]
pub struct UpDownSampler {
    k: usize,
    forest: KForest,
    dynamic: LinkCutForest,
    steps_per_round: u64,
    round_cap: u64,
}

impl UpDownSampler {
    /// Starts from a uniform spanning tree minus its most balanced cut.
    pub fn new(g: &Graph, k: usize, mixing_multiplier: f64, rng: &mut RngStream) -> Result<Self> {
        check_divisible(g, k)?;
        if !(mixing_multiplier.is_finite() && mixing_multiplier >= 0.0) {
            return Err(Error::InvalidParameter(format!("mixing multiplier {mixing_multiplier}")));
        }
        let tree = wilson(g, 0, &[], rng)?.tree;
        let cut = find_min_imbalance_split(&tree, k)?.cut_edges;
        let edges: Vec<usize> = tree.edge_ids().filter(|e| !cut.contains(e)).collect();
        let forest = KForest::new(g, &edges)?;
        let dynamic = forest.to_dynamic(LinkCutForest::new)?;
        let m = g.num_edges() as f64;
        let steps_per_round = if m > 1.0 { (mixing_multiplier * m * m.ln()).ceil() as u64 } else { 0 };
        Ok(UpDownSampler { k, forest, dynamic, steps_per_round, round_cap: DEFAULT_ROUND_CAP })
    }

    pub fn with_round_cap(mut self, cap: u64) -> Self {
        self.round_cap = cap;
        self
    }

    pub fn steps_per_round(&self) -> u64 {
        self.steps_per_round
    }

    pub fn forest(&self) -> &KForest {
        &self.forest
    }

    pub fn sample(&mut self, rng: &mut RngStream) -> Result<(Partition, SamplerReport)> {
        let clock = Instant::now();
        let mut report = SamplerReport::new(rng.seed());
        report.degenerate_mixing = self.steps_per_round == 0;
        let can_move = !self.forest.non_edges().is_empty();
        loop {
            if report.rounds_attempted == self.round_cap {
                return Err(Error::RoundCapExceeded {
                    rounds: self.round_cap,
                    detail: format!("no balanced {}-forest after {} steps", self.k, report.steps_taken),
                });
            }
            report.rounds_attempted += 1;
            if can_move {
                for _ in 0..self.steps_per_round {
                    updown_step(&mut self.forest, &mut self.dynamic, rng)?;
                }
                report.steps_taken += self.steps_per_round;
            }
            let (labels, sizes) = self.forest.components();
            if sizes.windows(2).all(|w| w[0] == w[1]) {
                report.accepted += 1;
                report.wall_clock_secs = clock.elapsed().as_secs_f64();
                return Ok((Partition::from_labels(self.forest.host(), &labels)?, report));
            }
            report.rejected_not_balanced += 1;
        }
    }
}

/// One approximate sample from a fresh walk; see [`UpDownSampler`].
pub fn approx_balanced_sample(
    g: &Graph,
    k: usize,
    mixing_multiplier: f64,
    rng: &mut RngStream,
) -> Result<(Partition, SamplerReport)> {
    UpDownSampler::new(g, k, mixing_multiplier, rng)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::NaiveForest;
    use crate::planar::build_grid;

    #[test]
    fn two_by_two_partitions_are_even() {
        let g = build_grid(2, 2).unwrap();
        let sampler = PerfectSampler::new(&g, 2).unwrap();
        let mut rng = RngStream::new(9, 0);
        let mut horizontal = 0;
        let trials = 20_000;
        for _ in 0..trials {
            let (p, report) = sampler.sample(&mut rng).unwrap();
            assert_eq!(report.accepted + report.rejected(), report.rounds_attempted);
            assert_eq!(p.class_sizes(), vec![2, 2]);
            // Bottom row {0, 1} versus left column {0, 2}.
            horizontal += usize::from(p.classes()[0] == vec![0, 1]);
        }
        let f = horizontal as f64 / trials as f64;
        assert!((f - 0.5).abs() < 0.02, "{f}");
    }

    #[test]
    fn rejects_indivisible_k() {
        let g = build_grid(3, 3).unwrap();
        assert!(matches!(PerfectSampler::new(&g, 2), Err(Error::NotDivisible { .. })));
        assert!(UpDownSampler::new(g.graph(), 2, 10.0, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn cycle_removal_is_uniform() {
        // Path forest 0-1-2-3-4 plus isolated 5 in a 6-cycle with a chord.
        let g = Graph::new(6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5)]).unwrap();
        let start = KForest::new(&g, &[0, 1, 2, 3]).unwrap();
        let mut counts = [0usize; 6];
        let mut rng = RngStream::new(4, 0);
        let mut cyc = 0;
        for _ in 0..100_000 {
            let mut f = start.clone();
            let mut d = f.to_dynamic(NaiveForest::new).unwrap();
            let mv = updown_step(&mut f, &mut d, &mut rng).unwrap();
            if mv.added == 4 {
                cyc += 1;
                counts[mv.removed] += 1;
            }
            assert_eq!(f.components().1.len(), 2);
        }
        for e in 0..5 {
            let freq = counts[e] as f64 / cyc as f64;
            assert!((freq - 0.2).abs() < 0.01, "{counts:?}");
        }
    }

    #[test]
    fn zero_multiplier_is_flagged() {
        let g = build_grid(2, 2).unwrap();
        let mut rng = RngStream::new(1, 0);
        let mut s = UpDownSampler::new(g.graph(), 2, 0.0, &mut rng).unwrap().with_round_cap(5);
        match s.sample(&mut rng) {
            Ok((_, report)) => assert!(report.degenerate_mixing),
            Err(e) => assert!(matches!(e, Error::RoundCapExceeded { .. })),
        }
    }

    #[test]
    fn updown_output_is_balanced() {
        let g = build_grid(3, 4).unwrap();
        let mut rng = RngStream::new(2, 0);
        let mut s = UpDownSampler::new(g.graph(), 2, 2.0, &mut rng).unwrap();
        for _ in 0..50 {
            let (p, report) = s.sample(&mut rng).unwrap();
            assert_eq!(p.class_sizes(), vec![6, 6]);
            assert_eq!(report.accepted + report.rejected(), report.rounds_attempted);
        }
    }
}
