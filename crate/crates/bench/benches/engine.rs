//! Timings for the main pipeline stages: the coefficient group, the
//! differential and its square-zero certificate, move maps, and the
//! finite-field enumerations.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use trivalent_bench::{fixtures, Fixture};
use trivalent_dga::colorings::{counting_identities, verify_bijection};
use trivalent_dga::dg_transformations::{algebra_generators, move_v_map};
use trivalent_dga::group_theory::Group;
use trivalent_dga::plane_graph::PlaneGraph;
use trivalent_dga::representations::{enumerate_representations, FiniteField};
use trivalent_dga::words::{differential, verify_d_squared};

fn bench_algebra(c: &mut Criterion) {
    let fx = fixtures();
    let mut group = c.benchmark_group("algebra");
    group.sample_size(10);
    for f in &fx {
        group.bench_with_input(BenchmarkId::new("coefficient_group", f.name), &f.graph, |b, g| b.iter(|| Group::full(black_box(g)).unwrap()));
        group.bench_with_input(BenchmarkId::new("differential", f.name), f, |b, f| b.iter(|| differential(&f.graph, black_box(&f.garden))));
        group.bench_with_input(BenchmarkId::new("d_squared", f.name), f, |b, f| {
            b.iter(|| verify_d_squared(&f.graph, black_box(&f.garden), &f.ring).is_ok())
        });
    }
    group.finish();
}

fn bench_moves(c: &mut Criterion) {
    let fx = fixtures();
    let mut group = c.benchmark_group("moves");
    group.sample_size(10);
    for f in fx.iter().take(2) {
        let gens = algebra_generators(&f.graph);
        group.bench_with_input(BenchmarkId::new("move_v_intertwines", f.name), f, |b, f: &Fixture| {
            b.iter(|| {
                let (next, map) = move_v_map(&f.graph, &f.complex, &f.garden, 1).unwrap();
                map.check_intertwines(&gens, &differential(&f.graph, &f.garden), &differential(&f.graph, &next), &f.ring).is_ok()
            })
        });
    }
    group.finish();
}

fn bench_sheaves(c: &mut Criterion) {
    let k4 = Fixture::new("k4", PlaneGraph::k4());
    let theta = Fixture::new("theta", PlaneGraph::theta());
    let f3 = FiniteField::new(3).unwrap();
    let f2 = FiniteField::new(2).unwrap();
    let k4_tree = k4.graph.enumerate_trees(0).remove(0);
    let theta_tree = theta.graph.enumerate_trees(0).remove(0);
    let mut group = c.benchmark_group("sheaves");
    group.sample_size(10);
    group.bench_function("k4_representations_q3_r2", |b| {
        b.iter(|| enumerate_representations(&k4.graph, &k4.garden, &k4_tree, black_box(&f3), 2).unwrap().len())
    });
    group.bench_function("theta_bijection_q2_r2", |b| {
        b.iter(|| verify_bijection(&theta.graph, &theta.garden, &theta_tree, black_box(&f2), 2).unwrap().passes())
    });
    group.bench_function("cube_counting_q3", |b| b.iter(|| counting_identities(&PlaneGraph::cube(), black_box(&f3)).unwrap().passes()));
    group.finish();
}

criterion_group!(benches, bench_algebra, bench_moves, bench_sheaves);
criterion_main!(benches);
