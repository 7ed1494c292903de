use std::hint::black_box;

use bayesges::bayes::{
    conjugate_log_evidence, solve_epsilon, DpmConfig, EvidenceBackend, EvidenceKey, GaussianHyper, LeCamConfig,
};
use bayesges::graph::{all_dags, nb_plus};
use bayesges::{cpdag_of, ges, DsepOracle, OddsConfig, OddsTest, PopulationTest, VertexSet};
use bayesges_bench::linear_problem;
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

fn graphs(c: &mut Criterion) {
    let dags = all_dags(4);
    c.bench_function("cpdag_of/all 4-node dags", |b| {
        b.iter(|| dags.iter().map(|g| cpdag_of(black_box(g)).n_edges()).sum::<usize>())
    });
    c.bench_function("nb_plus/all 4-node dags", |b| {
        b.iter(|| dags.iter().map(|g| nb_plus(black_box(g)).len()).sum::<usize>())
    });
}

fn evidence(c: &mut Criterion) {
    let (_, data) = linear_problem(6, 0.4, 10_000, 1);
    let key = EvidenceKey::new(5, VertexSet::full(3)).unwrap();
    c.bench_function("conjugate evidence/n=1e4 |S|=3", |b| {
        b.iter(|| conjugate_log_evidence(black_box(&data), key, &GaussianHyper::default()).unwrap())
    });

    let (_, small) = linear_problem(3, 0.5, 500, 2);
    let backend = EvidenceBackend::Dpm(DpmConfig {
        m: 200,
        ..Default::default()
    });
    let key = EvidenceKey::new(2, VertexSet::singleton(0)).unwrap();
    c.bench_function("dpm evidence/n=500 M=200", |b| {
        b.iter(|| backend.log_evidence(black_box(&small), key).unwrap())
    });
}

fn rates(c: &mut Criterion) {
    let cfg = LeCamConfig::new(1.0, 1_000_000, 10).unwrap();
    let sparsity = [0, 1, 2, 3, 1, 0, 2, 2, 1, 3];
    c.bench_function("solve_epsilon/d=10", |b| b.iter(|| solve_epsilon(&cfg, black_box(&sparsity)).unwrap()));
}

fn search(c: &mut Criterion) {
    let (spec, data) = linear_problem(6, 0.4, 5_000, 3);
    c.bench_function("ges/oracle d=6", |b| {
        b.iter(|| ges(&PopulationTest::new(DsepOracle::new(spec.dag.clone()))).unwrap())
    });
    c.bench_function("ges/odds conjugate d=6 n=5000", |b| {
        b.iter_batched(
            || OddsTest::new(&data, &OddsConfig::default()).unwrap(),
            |test| ges(&test).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, graphs, evidence, rates, search);
criterion_main!(benches);
