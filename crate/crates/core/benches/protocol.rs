use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qtele_core::reversal::averaged_fmax_with;
use qtele_core::states::{input_state, Correlation, ResourceSpec, WernerParam};
use qtele_core::teleport::simulate_double_with;
use qtele_core::Execution;

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn simulate(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate_double");
    let input = input_state(0.3);
    for kind in [Correlation::Uncorrelated, Correlation::Correlated] {
        let spec = ResourceSpec::new(kind, [0.4, 0.2, 0.3, 0.1]).unwrap();
        for (label, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(kind.name(), label), &exec, |b, &exec| {
                b.iter(|| simulate_double_with(black_box(&input), &spec, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn werner_sweep(c: &mut Criterion) {
    let points: Vec<(f64, f64)> = (0..=10)
        .flat_map(|p| (0..=4).map(move |t| (p as f64 / 10.0, t as f64 * std::f64::consts::PI / 16.0)))
        .collect();
    let mut group = c.benchmark_group("werner_fidelity_sweep");
    group.sample_size(10);
    for (label, exec) in STRATEGIES {
        group.bench_function(label, |b| {
            b.iter(|| {
                exec.try_map(&points, |&(phi, theta)| {
                    let spec = ResourceSpec::werner(Correlation::Uncorrelated, WernerParam::new(phi)?);
                    averaged_fmax_with(&spec, theta, Execution::Sequential).map(|r| r.averaged_fmax)
                })
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, simulate, werner_sweep);
criterion_main!(benches);
