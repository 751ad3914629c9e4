use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spcube::constructions::{f2_vertex_set, mean_vertex_density};
use spcube::embeddings::density_t_with;
use spcube::search::m_table_with;
use spcube::spterm::enumerate_connected_sp_with;
use spcube::{Exec, Kind, Pattern};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn m_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("m_table");
    group.sample_size(10);
    for (name, exec) in EXECS {
        group.bench_with_input(BenchmarkId::new(name, 10), &10, |b, &d| {
            b.iter(|| m_table_with(black_box(d), exec).unwrap())
        });
    }
    group.finish();
}

fn density(c: &mut Criterion) {
    let x = Pattern::full_layer(Kind::Vertex, 2, 2).unwrap();
    let s = f2_vertex_set(5, 5, 1).unwrap();
    let mut group = c.benchmark_group("density_t");
    for (name, exec) in EXECS {
        group.bench_function(name, |b| b.iter(|| density_t_with(black_box(&x), &s, exec).unwrap()));
    }
    group.finish();
}

fn f2_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("f2_trials");
    group.sample_size(10);
    for (name, exec) in EXECS {
        group.bench_function(name, |b| b.iter(|| mean_vertex_density(8, 8, black_box(0), 20, exec).unwrap()));
    }
    group.finish();
}

fn connected_sp(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_connected_sp");
    group.sample_size(10);
    for (name, exec) in EXECS {
        group.bench_with_input(BenchmarkId::new(name, 7), &7, |b, &d| {
            b.iter(|| enumerate_connected_sp_with(black_box(d), exec))
        });
    }
    group.finish();
}

criterion_group!(benches, m_table, density, f2_trials, connected_sp);
criterion_main!(benches);
