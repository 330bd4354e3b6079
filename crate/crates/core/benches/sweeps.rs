use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fk_core::estimator::{brownian_path_with, measure_with, Ladder, Method};
use fk_core::geometry::{refine_with, Builtin, Polyline, RefineOptions};
use fk_core::measures::scale_table_with;
use fk_core::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn refinement(c: &mut Criterion) {
    let base = Polyline::base_segment(1.0).unwrap();
    let koch = Builtin::Koch.spec().unwrap();
    let mut group = c.benchmark_group("refine_koch_level9");
    group.sample_size(20);
    for (name, execution) in MODES {
        let opts = RefineOptions {
            execution,
            ..Default::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| refine_with(black_box(&base), &koch, 9, &opts).unwrap())
        });
    }
    group.finish();
}

fn box_counting(c: &mut Criterion) {
    let koch = Builtin::Koch.spec().unwrap();
    let poly = refine_with(
        &Polyline::base_segment(1.0).unwrap(),
        &koch,
        8,
        &RefineOptions::default(),
    )
    .unwrap();
    let ladder = Ladder::new(1.0, 3.0, 1, 6).unwrap();
    let mut group = c.benchmark_group("grid_sweep_koch_level8");
    group.sample_size(20);
    for (name, execution) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| measure_with(black_box(&poly), Method::Grid, &ladder, execution).unwrap())
        });
    }
    group.finish();
}

fn brownian(c: &mut Criterion) {
    let mut group = c.benchmark_group("brownian_1e5");
    for (name, execution) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| brownian_path_with(black_box(100_000), 7, 1.0, execution).unwrap())
        });
    }
    group.finish();
}

fn tables(c: &mut Criterion) {
    let peano = Builtin::Peano.spec().unwrap();
    let mut group = c.benchmark_group("scale_table_k200");
    for (name, execution) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| scale_table_with(&peano, 1.0, 1.0, black_box(200), execution).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, refinement, box_counting, brownian, tables);
criterion_main!(benches);
