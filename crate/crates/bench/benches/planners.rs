use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pulse_seek::{
    general_onestep_alpha, optimize_ladder, periodic_load_profile, plan_multistage, prob_k_in_aperture,
};
use pulse_seek_bench::stepped_prior;

fn planners(c: &mut Criterion) {
    let prior = stepped_prior(64);
    c.bench_function("periodic_load_profile/64", |b| {
        b.iter(|| periodic_load_profile(black_box(&prior), 0.05).unwrap())
    });
    c.bench_function("general_onestep_alpha/64", |b| {
        b.iter(|| general_onestep_alpha(black_box(&prior), 0.05, 1.0, 10.0).unwrap())
    });
    c.bench_function("prob_k_in_aperture/50", |b| {
        b.iter(|| (1..=50).map(|k| prob_k_in_aperture(50, k, black_box(0.3)).unwrap()).sum::<f64>())
    });
    let mut group = c.benchmark_group("optimize_ladder");
    group.sample_size(10);
    for n in [2usize, 30] {
        group.bench_function(format!("n={n}/eps=1e-3"), |b| b.iter(|| optimize_ladder(n, black_box(1e-3)).unwrap()));
    }
    group.finish();
    c.bench_function("plan_multistage/n=4", |b| {
        b.iter(|| plan_multistage(4, 1.0, black_box(1e-7), 1.0).unwrap())
    });
}

criterion_group!(benches, planners);
criterion_main!(benches);
