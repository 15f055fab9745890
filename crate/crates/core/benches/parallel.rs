use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nielsen_core::expansion::expansion_coefficients;
use nielsen_core::par::Execution;
use nielsen_core::registry::build;
use nielsen_core::verify::{decay_check, integrate_in};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrate_in zn-norm n=64");
    group.sample_size(10);
    for (name, exec) in MODES {
        let spec = build("zn-norm", None, None, 2, 512).unwrap().with_execution(exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &spec, |b, spec| {
            b.iter(|| integrate_in(spec, 64).unwrap())
        });
    }
    group.finish();
}

fn coefficients(c: &mut Criterion) {
    let mut group = c.benchmark_group("expansion yn-difference P=12");
    group.sample_size(10);
    for (name, exec) in MODES {
        let spec = build("yn-difference", None, None, 12, 1024).unwrap().with_execution(exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &spec, |b, spec| {
            b.iter(|| expansion_coefficients(spec).unwrap())
        });
    }
    group.finish();
}

fn decay(c: &mut Criterion) {
    let mut group = c.benchmark_group("decay_check hermite P=4");
    group.sample_size(10);
    for (name, exec) in MODES {
        let spec = build("hermite-lognormal", None, None, 4, 256).unwrap().with_execution(exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &spec, |b, spec| {
            b.iter(|| decay_check(spec, 4, &[16, 32, 64, 128]).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, quadrature, coefficients, decay);
criterion_main!(benches);
