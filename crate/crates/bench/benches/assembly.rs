use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use helmscatter::bio::assemble_all;
use helmscatter::formulations::assemble_system;
use helmscatter::solver::gmres;
use helmscatter::{c64, Formulation};
use helmscatter_bench::kite;
use std::hint::black_box;

fn bios(c: &mut Criterion) {
    let mut g = c.benchmark_group("assemble_all");
    g.sample_size(10);
    for n in [128, 256, 512] {
        let fx = kite(10.0, n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &fx, |b, fx| {
            b.iter(|| assemble_all(black_box(c64::new(5.0, 0.0)), &fx.curve).unwrap())
        });
    }
    g.finish();
}

fn systems(c: &mut Criterion) {
    let mut g = c.benchmark_group("assemble_system");
    g.sample_size(10);
    let fx = kite(20.0, 256).unwrap();
    for id in ["dirichlet.cfie", "dirichlet.cfier.rd", "neumann.cfie", "neumann.cfier.rn"] {
        let f: Formulation = id.parse().unwrap();
        g.bench_function(id, |b| b.iter(|| assemble_system(black_box(f), &fx.medium, &fx.curve).unwrap()));
    }
    g.finish();
}

fn solves(c: &mut Criterion) {
    let mut g = c.benchmark_group("gmres");
    g.sample_size(10);
    let fx = kite(20.0, 256).unwrap();
    for id in ["neumann.cfie", "neumann.cfier.rn"] {
        let f: Formulation = id.parse().unwrap();
        let sys = assemble_system(f, &fx.medium, &fx.curve).unwrap();
        let rhs = fx.rhs(f).unwrap();
        g.bench_function(id, |b| b.iter(|| gmres(&sys, black_box(&rhs), 1e-5, 512).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bios, systems, solves);
criterion_main!(benches);
