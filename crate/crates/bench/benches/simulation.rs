use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pulse_seek::{mc_prob_k, run_trials};
use pulse_seek_bench::ladder_scenario;

fn simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulation");
    group.sample_size(10);
    let single = ladder_scenario(vec![1.0, 0.46, 0.22, 0.1], 1, 10_000);
    group.bench_function("ladder/1 source/10k trials", |b| b.iter(|| run_trials(black_box(&single)).unwrap()));
    let multi = ladder_scenario(vec![1.0, 0.26, 0.1], 2, 10_000);
    group.bench_function("ladder/2 sources/10k trials", |b| b.iter(|| run_trials(black_box(&multi)).unwrap()));
    group.bench_function("mc_prob_k/n=8/100k", |b| b.iter(|| mc_prob_k(8, 3, black_box(0.3), 100_000, 7).unwrap()));
    group.finish();
}

criterion_group!(benches, simulation);
criterion_main!(benches);
