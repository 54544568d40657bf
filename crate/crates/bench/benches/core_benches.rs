use criterion::{black_box, criterion_group, criterion_main, Criterion};
use swbec::algebra::c;
use swbec::boundary::von_neumann_u;
use swbec::bulk::{chern_numeric, eigenprojection, BandLabel, MomentumC};
use swbec::indices::{arc_intersections, asymptotic_curve, index_vector, winding_n, ParabolaCurve};
use swbec::oracles::{numeric_parabola_winding, trace_branches, TraceConfig};
use swbec::scattering::jost_g_rescaled;
use swbec_bench::{dirichlet, nd_case, nn_case, phys};

fn bench_bulk(c0: &mut Criterion) {
    let p = phys();
    c0.bench_function("eigenprojection", |b| {
        b.iter(|| eigenprojection(black_box(MomentumC::real(0.7, -1.3)), BandLabel::Plus, &p))
    });
    c0.bench_function("chern_numeric_grid64", |b| {
        b.iter(|| chern_numeric(&p, BandLabel::Plus, 64).unwrap())
    });
}

fn bench_boundary(c0: &mut Criterion) {
    let bd = nn_case();
    c0.bench_function("von_neumann_unitary", |b| {
        b.iter(|| von_neumann_u(&bd, black_box(1.3)).unwrap())
    });
}

fn bench_scattering(c0: &mut Criterion) {
    let p = phys();
    let bd = nn_case();
    c0.bench_function("jost_rescaled_eval", |b| {
        b.iter(|| jost_g_rescaled(&bd, black_box(12.0), black_box(1.7), &p).unwrap())
    });
}

fn bench_indices(c0: &mut Criterion) {
    let p = phys();
    let nd = nd_case();
    let nn = nn_case();
    c0.bench_function("index_vector_nd", |b| b.iter(|| index_vector(&nd, &p).unwrap()));
    c0.bench_function("index_vector_nn", |b| b.iter(|| index_vector(&nn, &p).unwrap()));
    let curve = asymptotic_curve(&nn, &p).unwrap();
    c0.bench_function("arc_intersections", |b| {
        b.iter(|| arc_intersections(black_box(&curve)).unwrap())
    });
    let pc = ParabolaCurve::new(c(0.3, -0.7), c(1.1, 0.4), c(-0.2, 0.9));
    c0.bench_function("winding_calculus", |b| b.iter(|| winding_n(&pc).unwrap()));
    c0.bench_function("winding_numeric_oracle", |b| {
        b.iter(|| numeric_parabola_winding(&pc, 1.0e4).unwrap())
    });
}

fn bench_trace(c0: &mut Criterion) {
    let p = phys();
    let bd = dirichlet();
    let cfg = TraceConfig {
        kx_min: -10.0,
        kx_max: 10.0,
        kx_count: 121,
        omega_count: 400,
        ..TraceConfig::default()
    };
    let mut group = c0.benchmark_group("trace");
    group.sample_size(10);
    group.bench_function("dirichlet_narrow_window", |b| {
        b.iter(|| trace_branches(&bd, &cfg, &p).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_bulk,
    bench_boundary,
    bench_scattering,
    bench_indices,
    bench_trace
);
criterion_main!(benches);
