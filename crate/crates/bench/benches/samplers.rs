use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use treesplit::experiments::EdgeSplitSampler;
use treesplit::forest::{DynamicForest, KForest, LinkCutForest, NaiveForest};
use treesplit::{build_grid, updown_step, wilson, wilson_on_dual, PerfectSampler, RngStream};

fn spanning_trees(c: &mut Criterion) {
    let mut group = c.benchmark_group("spanning_tree");
    for side in [10, 30] {
        let g = build_grid(side, side).unwrap();
        group.bench_with_input(BenchmarkId::new("wilson_primal", side), &g, |b, g| {
            let mut t = 0;
            b.iter(|| {
                t += 1;
                black_box(wilson(g.graph(), 0, &[], &mut RngStream::new(1, t)).unwrap())
            })
        });
        group.bench_with_input(BenchmarkId::new("wilson_dual", side), &g, |b, g| {
            let mut t = 0;
            b.iter(|| {
                t += 1;
                black_box(wilson_on_dual(g, &[], &mut RngStream::new(2, t)).unwrap())
            })
        });
    }
    group.finish();
}

fn edge_split(c: &mut Criterion) {
    let g = build_grid(10, 10).unwrap();
    let edge = g.grid().unwrap().vertical_edge(4, 4);
    let mut sampler = EdgeSplitSampler::new(&g).unwrap();
    let mut t = 0;
    c.bench_function("edge_split_10x10", |b| {
        b.iter(|| {
            t += 1;
            black_box(sampler.sample(edge, &mut RngStream::new(3, t)).unwrap())
        })
    });
}

fn perfect(c: &mut Criterion) {
    let g = build_grid(3, 4).unwrap();
    let sampler = PerfectSampler::new(&g, 2).unwrap();
    let mut t = 0;
    c.bench_function("perfect_3x4_k2", |b| {
        b.iter(|| {
            t += 1;
            black_box(sampler.sample(&mut RngStream::new(4, t)).unwrap())
        })
    });
}

fn updown(c: &mut Criterion) {
    let g = build_grid(10, 10).unwrap();
    let mut rng = RngStream::new(5, 0);
    let tree = wilson(g.graph(), 0, &[], &mut rng).unwrap().tree;
    let edges: Vec<usize> = tree.edge_ids().skip(1).collect();
    let mut forest = KForest::new(g.graph(), &edges).unwrap();
    let mut dynamic = forest.to_dynamic(LinkCutForest::new).unwrap();
    c.bench_function("updown_step_10x10_k2", |b| {
        b.iter(|| black_box(updown_step(&mut forest, &mut dynamic, &mut rng).unwrap()))
    });
}

fn path_queries<D: DynamicForest>(f: &mut D, n: usize, rng: &mut RngStream) -> usize {
    let (u, v) = (rng.index(n), rng.index(n));
    let len = f.path_len(u, v).unwrap();
    if len == 0 {
        return 0;
    }
    f.path_edge_at(u, v, rng.index(len)).unwrap()
}

fn dynamic_forests(c: &mut Criterion) {
    let mut group = c.benchmark_group("path_edge_query");
    for n in [1_000, 10_000] {
        // A random recursive tree: vertex v hangs off a uniform earlier vertex.
        let mut rng = RngStream::new(6, n as u64);
        let parents: Vec<usize> = (1..n).map(|v| rng.index(v)).collect();
        let mut lct = LinkCutForest::new(n, n - 1);
        let mut naive = NaiveForest::new(n, n - 1);
        for (e, &p) in parents.iter().enumerate() {
            lct.link(e + 1, p, e).unwrap();
            naive.link(e + 1, p, e).unwrap();
        }
        group.bench_function(BenchmarkId::new("link_cut", n), |b| {
            b.iter(|| black_box(path_queries(&mut lct, n, &mut rng)))
        });
        group.bench_function(BenchmarkId::new("naive", n), |b| {
            b.iter(|| black_box(path_queries(&mut naive, n, &mut rng)))
        });
    }
    group.finish();
}

criterion_group!(benches, spanning_trees, edge_split, perfect, updown, dynamic_forests);
criterion_main!(benches);
