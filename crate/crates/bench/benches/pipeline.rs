use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use quatisom_bench::{invariant_grid, mixed_batch};
use quatisom_core::{
    chi, classify, eigenvalues_closed_form, eigenvalues_oracle, fixed_points, quartic_roots, region_of,
    representation::invariants_unchecked, sylvester_resultant, Tolerance,
};

const SEED: u64 = 20240601;

fn representation(c: &mut Criterion) {
    let batch = mixed_batch(SEED, 64);
    c.bench_function("chi", |b| b.iter(|| batch.iter().map(|p| chi(black_box(p)).max_norm()).sum::<f64>()));
    c.bench_function("invariants", |b| {
        b.iter(|| batch.iter().map(|p| invariants_unchecked(black_box(p)).tau).sum::<f64>())
    });
}

fn spectrum(c: &mut Criterion) {
    let tol = Tolerance::default();
    let grid = invariant_grid();
    c.bench_function("region_of", |b| {
        b.iter(|| grid.iter().filter(|q| region_of(black_box(q), tol).is_realizable()).count())
    });
    c.bench_function("sylvester_resultant", |b| {
        b.iter(|| grid.iter().map(|q| sylvester_resultant(black_box(q))).sum::<f64>())
    });
    let realizable: Vec<_> = grid.into_iter().filter(|q| region_of(q, tol).is_realizable()).collect();
    c.bench_function("closed_form", |b| {
        b.iter(|| realizable.iter().filter(|q| eigenvalues_closed_form(black_box(q), tol).is_ok()).count())
    });
    c.bench_function("root_oracle", |b| {
        b.iter(|| realizable.iter().filter(|q| eigenvalues_oracle(black_box(q), tol).is_ok()).count())
    });
    c.bench_function("quartic_roots", |b| {
        b.iter(|| realizable.iter().filter(|q| quartic_roots(black_box(q)).is_ok()).count())
    });
}

fn pipeline(c: &mut Criterion) {
    let tol = Tolerance::default();
    let batch = mixed_batch(SEED, 64);
    c.bench_function("fixed_points", |b| {
        b.iter(|| batch.iter().filter(|p| fixed_points(black_box(p), tol).is_ok()).count())
    });
    c.bench_function("classify", |b| {
        b.iter_batched(
            || batch.clone(),
            |ps| ps.iter().filter(|p| classify(p, tol).is_ok()).count(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, representation, spectrum, pipeline);
criterion_main!(benches);
