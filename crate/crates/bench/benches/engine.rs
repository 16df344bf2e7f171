use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sdeinv_bench::fixture;
use sdeinv_core::algebra::certified_rank;
use sdeinv_core::counting::{orbit_germ, spanning_matrix};
use sdeinv_core::invariants::{evaluate_invariant, g_matrix};
use sdeinv_core::jet::sample_sde_germ;
use sdeinv_core::symmetry::{make_generator, monomial, prolong_eval};
use sdeinv_core::Which;

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_sde_germ");
    for k in [2u32, 3, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| sample_sde_germ(black_box(k), 5).unwrap())
        });
    }
    g.finish();
}

fn prolongation(c: &mut Criterion) {
    let germ = fixture(4);
    let x = make_generator(5, &monomial(2, 1)).unwrap();
    c.bench_function("prolong_eval X5(z^2 t) k=3", |b| {
        b.iter(|| prolong_eval(black_box(&x), 3, &germ).unwrap())
    });
}

fn orbit_rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("spanning_matrix_rank");
    g.sample_size(10);
    for k in [3u32, 4] {
        let germ = orbit_germ(k, 3).unwrap();
        g.bench_with_input(BenchmarkId::new("build", k), &k, |b, &k| {
            b.iter(|| spanning_matrix(k, &germ).unwrap())
        });
        let m = spanning_matrix(k, &germ).unwrap();
        g.bench_with_input(BenchmarkId::new("rank", k), &m, |b, m| {
            b.iter(|| certified_rank(black_box(m)))
        });
    }
    g.finish();
}

fn invariants(c: &mut Criterion) {
    let germ = fixture(3);
    c.bench_function("evaluate I2", |b| {
        b.iter(|| evaluate_invariant(Which::I2, black_box(&germ)).unwrap())
    });
    c.bench_function("g_matrix", |b| b.iter(|| g_matrix(black_box(&germ)).unwrap()));
}

criterion_group!(benches, sampling, prolongation, orbit_rank, invariants);
criterion_main!(benches);
