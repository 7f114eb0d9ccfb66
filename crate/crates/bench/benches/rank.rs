use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lewislab_bench::extended_matrix;
use lewislab_core::lewis::build_extended_system;
use lewislab_core::{coset_table, rank_exact, rank_modular, GroupSpec, Lambda};

fn rank_routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    group.sample_size(10);
    for (spec, n) in [("gamma:3", 6), ("gamma0:11", 12), ("gamma:4", 8)] {
        let g: GroupSpec = spec.parse().unwrap();
        let m = extended_matrix(g, n);
        let id = format!("{spec} n={n}");
        group.bench_with_input(BenchmarkId::new("exact", &id), &m, |b, m| b.iter(|| rank_exact(m)));
        group.bench_with_input(BenchmarkId::new("modular", &id), &m, |b, m| b.iter(|| rank_modular(m)));
    }
    group.finish();
}

fn assembly(c: &mut Criterion) {
    let table = coset_table(GroupSpec::principal(5).unwrap()).unwrap();
    c.bench_function("assemble gamma:5 n=8", |b| {
        b.iter(|| build_extended_system(&table, 8, Lambda::Plus).unwrap())
    });
}

criterion_group!(benches, rank_routes, assembly);
criterion_main!(benches);
