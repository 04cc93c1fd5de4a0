use bogomolov::lattice::snf;
use bogomolov::oracle::{oracle, OracleOptions};
use bogomolov::{bogomolov, families, WedgeOptions, WedgeSystem};
use bogomolov_bench::{groups, random_matrix};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn multiplier(c: &mut Criterion) {
    let mut g = c.benchmark_group("bogomolov");
    g.sample_size(10);
    for (name, p) in groups() {
        g.bench_with_input(BenchmarkId::from_parameter(&name), &p, |b, p| {
            b.iter(|| bogomolov(p, &WedgeOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn exterior_square(c: &mut Criterion) {
    let p = families::series_g(1, 3, 1).unwrap();
    c.bench_function("wedge_system_G1_3_1", |b| b.iter(|| WedgeSystem::build(&p).unwrap().m_star_invariants().unwrap()));
}

fn smith(c: &mut Criterion) {
    let mut g = c.benchmark_group("snf");
    for n in [8, 16, 32] {
        let m = random_matrix(n, n, 20, n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| snf(m)));
    }
    g.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for (name, p) in [("heisenberg_3", families::heisenberg(3).unwrap()), ("heisenberg_5", families::heisenberg(5).unwrap())] {
        g.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, p| b.iter(|| oracle(p, &OracleOptions::default()).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, multiplier, exterior_square, smith, brute_force);
criterion_main!(benches);
