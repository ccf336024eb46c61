use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cmodlab_bench::{fiber_product, lcg_matrix, twisted_ci};
use cmodlab_core::dvr::{smith_normal_form, Dvr, SnfOptions};
use cmodlab_core::invariants::{congruence_module, deform, ext1_truncated};
use cmodlab_core::poly::{parse_poly, TruncationContext};

fn snf(c: &mut Criterion) {
    let ring = Dvr::new(3).unwrap();
    let mut g = c.benchmark_group("snf");
    for n in [8, 16, 32] {
        let m = lcg_matrix(&ring, n, 17);
        g.bench_with_input(BenchmarkId::new("exponents", n), &m, |b, m| {
            b.iter(|| smith_normal_form(&ring, black_box(m), SnfOptions::NONE))
        });
        g.bench_with_input(BenchmarkId::new("transforms", n), &m, |b, m| {
            b.iter(|| smith_normal_form(&ring, black_box(m), SnfOptions::BOTH))
        });
    }
    g.finish();
}

fn fiber_products(c: &mut Criterion) {
    let mut g = c.benchmark_group("c0");
    for ms in [vec![1, 2], vec![1, 2, 4, 5]] {
        let a = fiber_product(5, &ms);
        let m = a.regular_module();
        g.bench_function(format!("fiber_product_{}", ms.len()), |b| {
            b.iter(|| congruence_module(a.algebra(), &a.structure, black_box(&m)).unwrap())
        });
    }
    g.finish();
}

fn descent(c: &mut Criterion) {
    let a = twisted_ci(3, 2, &[2, 3]);
    let m = a.regular_module();
    c.bench_function("descent/ci_c2_rank4", |b| b.iter(|| congruence_module(a.algebra(), &a.structure, black_box(&m)).unwrap()));
}

fn truncated(c: &mut Criterion) {
    let a = twisted_ci(2, 1, &[2]);
    let m = a.regular_module();
    let ctx = TruncationContext::default();
    c.bench_function("ext1/ci_c1", |b| b.iter(|| ext1_truncated(a.algebra(), &a.structure, black_box(&m), &ctx).unwrap()));
    let f = parse_poly("8t", &a.algebra().names()).unwrap();
    c.bench_function("deform/quotient_c1", |b| {
        b.iter(|| deform(a.algebra(), &a.structure, black_box(&m), std::slice::from_ref(&f), &ctx).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = snf, fiber_products, descent, truncated
}
criterion_main!(benches);
