use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ncg_bench::{sm_model, tori};
use ncg_core::clifford::{self, Signature};
use ncg_core::sm::{self, ZParams};
use ncg_core::specact::{self, EvalPath};
use ncg_core::{ncforms, Complex64, CutoffFn};
use std::hint::black_box;

fn bench_clifford(c: &mut Criterion) {
    let mut g = c.benchmark_group("clifford_build");
    for (q, p) in [(1, 3), (3, 3), (2, 6)] {
        let sig = Signature::new(q, p).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(sig), &sig, |b, &sig| {
            b.iter(|| clifford::build(black_box(sig)).unwrap())
        });
    }
    g.finish();
}

fn bench_sm(c: &mut Criterion) {
    let model = sm_model(7);
    let z = ZParams::uniform(1.0);
    let mut g = c.benchmark_group("sm");
    g.sample_size(10);
    g.bench_function("q_space", |b| b.iter(|| ncforms::q_space(black_box(&model.triple))));
    let q = ncforms::q_space(&model.triple);
    g.bench_function("oracle_coeffs", |b| {
        b.iter(|| sm::lagrangian_coeffs_oracle_with(&model, &q, black_box(&z)).unwrap())
    });
    g.bench_function("closed_coeffs", |b| b.iter(|| sm::lagrangian_coeffs(black_box(&z), &model.yukawas)));
    g.finish();
}

fn bench_spectral(c: &mut Criterion) {
    let f = CutoffFn::Gaussian;
    let mut g = c.benchmark_group("spectral_action");
    for spec in tori(2, 64) {
        let id = format!("{}+{}", spec.t, spec.s);
        g.bench_function(BenchmarkId::new("grid_d2", &id), |b| {
            b.iter(|| specact::spectral_action(black_box(&spec), &f, 8.0, EvalPath::Grid).unwrap())
        });
        g.bench_function(BenchmarkId::new("fourier_d2", &id), |b| {
            b.iter(|| specact::spectral_action(black_box(&spec), &f, 8.0, EvalPath::Fourier).unwrap())
        });
    }
    for spec in tori(4, 32) {
        let id = format!("{}+{}", spec.t, spec.s);
        g.bench_function(BenchmarkId::new("fourier_d4", &id), |b| {
            b.iter(|| specact::spectral_action(black_box(&spec), &f, 8.0, EvalPath::Fourier).unwrap())
        });
    }
    g.finish();
}

fn bench_heat_trace(c: &mut Criterion) {
    let [_, lorentz] = tori(4, 256);
    let theta = Complex64::new(-1e-4, 0.3);
    c.bench_function("heat_trace_d4_n256", |b| b.iter(|| specact::heat_trace(black_box(&lorentz), theta)));
}

criterion_group!(benches, bench_clifford, bench_sm, bench_spectral, bench_heat_trace);
criterion_main!(benches);
