use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use quadl::experiments::{run_mean_value, run_verify_suite, ExperimentConfig, RunOptions, VerifyOptions};

fn schedules() -> [(&'static str, usize); 2] {
    [("sequential", 1), ("parallel", 0)]
}

fn mean_value(c: &mut Criterion) {
    let mut group = c.benchmark_group("mean_value_q5");
    group.sample_size(10);
    for g in [2usize, 3] {
        for (name, workers) in schedules() {
            let cfg = ExperimentConfig { workers, ..ExperimentConfig::full(5, g, g) };
            group.bench_with_input(BenchmarkId::new(name, g), &cfg, |b, cfg| b.iter(|| run_mean_value(cfg).unwrap()));
        }
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_q13_g1");
    group.sample_size(10);
    for (name, workers) in schedules() {
        let opts = VerifyOptions { run: RunOptions { workers, ..RunOptions::default() }, ..VerifyOptions::default() };
        group.bench_function(name, |b| b.iter(|| run_verify_suite(13, 1, &opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, mean_value, verify);
criterion_main!(benches);
