use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dsfft::fft::ifft;
use dsfft::{run_sparse_ifft, Config, Execution};
use dsfft_bench::{gen_instance, run_error_rate, Sweep};

fn sweep_strategies(c: &mut Criterion) {
    let mut group = c.benchmark_group("error_rate_sweep");
    group.sample_size(10);
    for execution in [Execution::Sequential, Execution::Parallel] {
        let sweep = Sweep::new(Config::default(), 16, 0).with_execution(execution);
        group.bench_function(BenchmarkId::from_parameter(format!("{execution:?}")), |b| {
            b.iter(|| run_error_rate(black_box(14), &[20, 50], &sweep).unwrap())
        });
    }
    group.finish();
}

fn sparse_against_dense(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverse_transform");
    group.sample_size(10);
    let config = Config::default();
    for log2_len in [12u32, 16, 20] {
        let instance = gen_instance(log2_len, 20, 1).unwrap();
        group.bench_with_input(BenchmarkId::new("sparse", log2_len), &instance, |b, inst| {
            b.iter(|| run_sparse_ifft(&inst.oracle(), &config).unwrap())
        });
        let spectrum: Vec<_> = {
            let oracle = instance.oracle();
            (0..instance.len()).map(|k| oracle.fetch(k).unwrap()).collect()
        };
        group.bench_with_input(BenchmarkId::new("dense", log2_len), &spectrum, |b, s| {
            b.iter(|| ifft(black_box(s)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweep_strategies, sparse_against_dense);
criterion_main!(benches);
