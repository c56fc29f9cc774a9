use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qdet_bench::SMALL_LAMBDA;
use qdet_core::squeezing::{gain_from_state, giant_spin_ground_state, nn_ising_ground_state};

fn giant_spin(c: &mut Criterion) {
    let mut group = c.benchmark_group("giant_spin_gain");
    for m in [10, 50, 200] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| gain_from_state(&giant_spin_ground_state(m, black_box(SMALL_LAMBDA)).0).unwrap())
        });
    }
    group.finish();
}

fn nn_ring(c: &mut Criterion) {
    let mut group = c.benchmark_group("nn_ising_ground_state");
    group.sample_size(10);
    // 8 is the last dense size; 10 and 12 go through Lanczos
    for m in [8, 10, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| nn_ising_ground_state(m, black_box(SMALL_LAMBDA), 14).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, giant_spin, nn_ring);
criterion_main!(benches);
