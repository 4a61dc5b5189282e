use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use scatterkit::chordal::chordal_scattering_partition;
use scatterkit::general::general_strong_partition;
use scatterkit::spr::{solve_spr, SprInstance, SprOptions, TreeScheme};
use scatterkit::tree::{tree_scattering_partition, RootedTree};
use scatterkit::{gen, PathMode, Verifier};
use scatterkit_bench::{general_instances, tree_instances};

fn tree_partition(c: &mut Criterion) {
    let mut group = c.benchmark_group("tree_scattering");
    for (name, g) in tree_instances() {
        let t = RootedTree::new(&g, 0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &t, |b, t| b.iter(|| tree_scattering_partition(t, black_box(12.0))));
    }
    group.finish();
}

fn verify_scattering(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_scattering");
    group.sample_size(10);
    for (name, g) in tree_instances().into_iter().take(2) {
        let p = tree_scattering_partition(&RootedTree::new(&g, 0).unwrap(), 12.0);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| Verifier::new(&g).verify_scattering(&p, 2.0, 3, 12.0, PathMode::Canonical).unwrap())
        });
    }
    group.finish();
}

fn general_partition(c: &mut Criterion) {
    let mut group = c.benchmark_group("general_strong");
    for (name, g) in general_instances() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| general_strong_partition(&g, black_box(6.0), 1).unwrap()));
    }
    group.finish();
}

fn chordal_partition(c: &mut Criterion) {
    let g = gen::random_ktree(200, 3, 7);
    c.bench_function("chordal_scattering/ktree200", |b| b.iter(|| chordal_scattering_partition(&g, black_box(6.0)).unwrap()));
}

fn spr(c: &mut Criterion) {
    let g = gen::random_tree(200, 3, 11);
    let inst = SprInstance::new(g, gen::random_terminals(200, 8, 11)).unwrap();
    let mut group = c.benchmark_group("spr");
    group.sample_size(10);
    group.bench_function("tree200_k8", |b| b.iter(|| solve_spr(&inst, &TreeScheme, SprOptions { check_scheme: false }).unwrap()));
    group.finish();
}

criterion_group!(benches, tree_partition, verify_scattering, general_partition, chordal_partition, spr);
criterion_main!(benches);
