use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use grandlab::duality::{n_mr, PsiKind};
use grandlab::fourier::{coeffs, haar_partial, hilbert, s_m};
use grandlab::norms::{g_psi, lp, orlicz};
use grandlab::PsiFunction;
use grandlab_bench::{log_singular, smooth};

fn norms(c: &mut Criterion) {
    let f = log_singular(16384);
    let n = n_mr(1.0, 0.0).unwrap();
    let psi = PsiFunction::new(1.0, PsiKind::Power { m: 1.0 }).unwrap();
    c.bench_function("lp p=8 graded 16384", |b| b.iter(|| lp(black_box(&f), 8.0)));
    c.bench_function("orlicz N_1 graded 16384", |b| b.iter(|| orlicz(black_box(&f), &n)));
    c.bench_function("g_psi psi_1 graded 16384", |b| b.iter(|| g_psi(black_box(&f), 2.0, &psi)));
}

fn fourier(c: &mut Criterion) {
    let mut group = c.benchmark_group("fourier");
    for n in [1024usize, 16384] {
        let f = smooth(n);
        group.bench_with_input(BenchmarkId::new("coeffs", n), &f, |b, f| b.iter(|| coeffs(f, n / 2)));
        group.bench_with_input(BenchmarkId::new("partial sum M=64", n), &f, |b, f| b.iter(|| s_m(f, 64)));
        group.bench_with_input(BenchmarkId::new("hilbert", n), &f, |b, f| b.iter(|| hilbert(f)));
        group.bench_with_input(BenchmarkId::new("haar M=256", n), &f, |b, f| b.iter(|| haar_partial(f, 256)));
    }
    group.finish();
}

criterion_group!(benches, norms, fourier);
criterion_main!(benches);
