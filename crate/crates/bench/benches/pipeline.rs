use bsato_core::{
    ann_fs, global_reduced_bfunction, local_bfunction_swh, parse_poly, solve_h_f0, xi_order,
    GroebnerConfig, MultiPoly, VarSet, WeightSystem, WeylRing,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn two_var(src: &str) -> MultiPoly {
    let vars = VarSet::new(["x", "y"]);
    parse_poly(src, &vars).unwrap()
}

fn bench_annihilator(c: &mut Criterion) {
    let f = two_var("x^3 + y^2");
    let ring = WeylRing::new(f.vars()).unwrap();
    let cfg = GroebnerConfig::default();
    c.bench_function("ann_fs cusp", |b| {
        b.iter(|| ann_fs(&ring, &f, &cfg).unwrap());
    });
}

fn bench_global_reduced(c: &mut Criterion) {
    let f = two_var("x^3 + y^2");
    let cfg = GroebnerConfig::default();
    c.bench_function("global_reduced cusp", |b| {
        b.iter(|| global_reduced_bfunction(&f, &cfg).unwrap());
    });
}

fn bench_local_pipeline(c: &mut Criterion) {
    let f = two_var("x^3 + y^4");
    let ws = WeightSystem::new(12, vec![4, 3]).unwrap();
    let cfg = GroebnerConfig::default();
    let mut group = c.benchmark_group("local");
    group.sample_size(10);
    group.bench_function("local_swh x^3+y^4", |b| {
        b.iter(|| local_bfunction_swh(&f, &ws, 2, &cfg, 64).unwrap());
    });
    group.finish();
}

fn bench_cohomology_solve(c: &mut Criterion) {
    let f = two_var("x^3 + y^10 + x*y^7 + x*y^8");
    let vars = f.vars().clone();
    let ord = xi_order(vars.len());
    let family: Vec<MultiPoly> = (0..vars.len()).map(|i| f.partial(i)).collect();
    c.bench_function("solve_h_f0 jacobian mu=18", |b| {
        b.iter(|| solve_h_f0(&family, &ord, 64).unwrap());
    });
}

criterion_group!(
    benches,
    bench_annihilator,
    bench_global_reduced,
    bench_local_pipeline,
    bench_cohomology_solve
);
criterion_main!(benches);
