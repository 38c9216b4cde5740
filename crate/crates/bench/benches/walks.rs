use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nuv_core::{
    all_pairs_distances, diameter, gen_grid, gen_mean_field, gen_square, mst_length, nuv_walk,
    Scaling,
};

fn walks(c: &mut Criterion) {
    let mut group = c.benchmark_group("nuv_walk");
    for n in [100, 400, 900] {
        let g = gen_mean_field(n, 1).unwrap();
        group.bench_with_input(BenchmarkId::new("mean_field", n), &g, |b, g| {
            b.iter(|| nuv_walk(black_box(g), 0).unwrap().total_length)
        });
        let g = gen_square(n, 1, Scaling::Unit).unwrap().graph;
        group.bench_with_input(BenchmarkId::new("square", n), &g, |b, g| {
            b.iter(|| nuv_walk(black_box(g), 0).unwrap().total_length)
        });
    }
    for m in [10, 20, 30] {
        let g = gen_grid(m, 1).unwrap();
        group.bench_with_input(BenchmarkId::new("grid", m * m), &g, |b, g| {
            b.iter(|| nuv_walk(black_box(g), 0).unwrap().total_length)
        });
    }
    group.finish();
}

fn distances(c: &mut Criterion) {
    let mut group = c.benchmark_group("distances");
    group.sample_size(10);
    let g = gen_grid(20, 1).unwrap();
    group.bench_function("all_pairs/grid/400", |b| {
        b.iter(|| all_pairs_distances(black_box(&g)).max())
    });
    let g = gen_mean_field(400, 1).unwrap();
    group.bench_function("all_pairs/mean_field/400", |b| {
        b.iter(|| all_pairs_distances(black_box(&g)).max())
    });
    group.bench_function("diameter/mean_field/400", |b| {
        b.iter(|| diameter(black_box(&g)))
    });
    group.bench_function("mst/mean_field/400", |b| {
        b.iter(|| mst_length(black_box(&g)))
    });
    group.finish();
}

criterion_group!(benches, walks, distances);
criterion_main!(benches);
