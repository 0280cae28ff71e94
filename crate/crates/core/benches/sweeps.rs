//! Sequential versus rayon execution of the data-parallel sweeps.

use abscroll_core::par;
use abscroll_core::scroll_invariants::top_chern_normal;
use abscroll_core::theorem_verifier::{sweep_with, termwise_sweep_with};
use abscroll_core::theta_geometry::{
    cyclic_subgroup, scroll_smoothness_probe_with, torsion_point, RankThresholds, ThetaEmbedding,
};
use abscroll_core::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn inequality_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("inequality_sweep_60x60");
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep_with(mode, 1..=60, 1..=60).unwrap())
        });
    }
    g.finish();
}

fn termwise(c: &mut Criterion) {
    let mut g = c.benchmark_group("termwise_sweep_60x60");
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| termwise_sweep_with(mode, 1..=60, 1..=60).unwrap())
        });
    }
    g.finish();
}

fn top_chern_grid(c: &mut Criterion) {
    let grid: Vec<(u32, u32)> = (1..=12)
        .flat_map(|n| (1..=12).map(move |k| (n, k)))
        .collect();
    let mut g = c.benchmark_group("top_chern_grid_12x12");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::map(mode, &grid, |&(n, k)| {
                    top_chern_normal(n, k, 2 * n + 2 * k - 1).unwrap()
                })
            })
        });
    }
    g.finish();
}

fn elliptic_probe(c: &mut Criterion) {
    let emb = ThetaEmbedding::elliptic(Complex64::new(0.0, 1.0), 7).unwrap();
    let group = cyclic_subgroup(&torsion_point(&emb, &[1], &[0], 3).unwrap());
    let th = RankThresholds::default();
    let mut g = c.benchmark_group("elliptic_probe_m7_100");
    g.sample_size(20);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| scroll_smoothness_probe_with(mode, &emb, &group, 100, 42, &th).unwrap())
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    inequality_sweep,
    termwise,
    top_chern_grid,
    elliptic_probe
);
criterion_main!(benches);
