use std::hint::black_box;

use cist_rcube::cist::build_with_graph;
use cist_rcube::{build_mpr, cists_rcube, verify_cists_characterization, LogicGraph, VertexId};
use cist_rcube_bench::SIZES;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construction");
    for (n, m, k) in SIZES {
        let id = format!("{n},{m},{k}");
        group.bench_with_input(
            BenchmarkId::new("graph", &id),
            &(n, m, k),
            |b, &(n, m, k)| b.iter(|| LogicGraph::build(black_box(n), m, k).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("cists", &id),
            &(n, m, k),
            |b, &(n, m, k)| b.iter(|| cists_rcube(black_box(n), m, k).unwrap()),
        );
        let (g, set) = build_with_graph(n, m, k).unwrap();
        group.bench_function(BenchmarkId::new("verify", &id), |b| {
            b.iter(|| verify_cists_characterization(&g, black_box(&set)).unwrap())
        });
        group.bench_function(BenchmarkId::new("routings", &id), |b| {
            b.iter(|| build_mpr(&set, black_box(VertexId(0))).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, construction);
criterion_main!(benches);
