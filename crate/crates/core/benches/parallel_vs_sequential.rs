use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pnt_lab::omega::minimize_grid;
use pnt_lab::sieve::build_tables_with;
use pnt_lab::zeros::{bundled_table_path, load_ordinates, reciprocal_gamma_sum_with};
use pnt_lab::{Parallelism, ZeroFreeRegion};

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn sieve(c: &mut Criterion) {
    let mut group = c.benchmark_group("sieve_1e7");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| build_tables_with(10_000_000, &[10_000_000], 1 << 18, mode).unwrap())
        });
    }
    group.finish();
}

fn zero_sum(c: &mut Criterion) {
    let zs = load_ordinates(bundled_table_path()).unwrap();
    let mut group = c.benchmark_group("reciprocal_gamma_sum");
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| reciprocal_gamma_sum_with(black_box(&zs), 74_000.0, mode).unwrap())
        });
    }
    group.finish();
}

fn omega_grid(c: &mut Criterion) {
    let region = ZeroFreeRegion::vinogradov_korobov(53.989).unwrap();
    let grid: Vec<f64> = (0..2000)
        .map(|k| 10f64.powf(2.0 + 6.0 * k as f64 / 1999.0))
        .collect();
    let mut group = c.benchmark_group("omega_grid_2000");
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| minimize_grid(&region, black_box(&grid), mode))
        });
    }
    group.finish();
}

criterion_group!(benches, sieve, zero_sum, omega_grid);
criterion_main!(benches);
