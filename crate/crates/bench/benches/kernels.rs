use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ibis_bench::{cohort, embeddings, grid_points, populated_memory};
use ibis_core::eval::{kde_fit, kde_log_score, Bandwidth};
use ibis_core::ibl::{blended_value, twin_replay, ReplayOptions};
use ibis_core::similarity::{cosine, weighted_cosine, WeightVector};
use ibis_core::{Category, IblParameters};

fn ibl(c: &mut Criterion) {
    let embs = embeddings(64, 50);
    let memory = populated_memory(&embs);
    let params = IblParameters::default();
    let q = &embs[0].values;
    c.bench_function("blended_value/100_instances/d64", |b| {
        b.iter(|| blended_value(&memory, Category::Phishing, black_box(q), &params, None).unwrap())
    });
    let (ds, _) = cohort(1);
    let pid = ds.participants()[0].to_string();
    c.bench_function("twin_replay/60_trials/d64", |b| {
        b.iter(|| twin_replay(ds.judgements_for(&pid), &ds, &params, ReplayOptions::default()).unwrap())
    });
}

fn similarity(c: &mut Criterion) {
    let embs = embeddings(3072, 1);
    let (x, y) = (&embs[0].values, &embs[1].values);
    let w = WeightVector::new((0..3072).map(|i| 0.5 + (i % 10) as f64 / 10.0).collect()).unwrap();
    c.bench_function("cosine/d3072", |b| {
        b.iter(|| cosine(black_box(x), black_box(y)).unwrap())
    });
    c.bench_function("weighted_cosine/d3072", |b| {
        b.iter(|| weighted_cosine(black_box(x), black_box(y), &w).unwrap())
    });
}

fn kde(c: &mut Criterion) {
    let fit = grid_points(500);
    let eval = grid_points(300);
    let model = kde_fit(&fit, Bandwidth::Scott).unwrap();
    c.bench_function("kde_log_score/500x300", |b| {
        b.iter(|| kde_log_score(&model, black_box(&eval)).unwrap())
    });
}

criterion_group!(benches, ibl, similarity, kde);
criterion_main!(benches);
