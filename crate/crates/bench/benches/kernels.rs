//! Timings of the hot kernels behind the acceptance suite.

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use slitherkit::circle_homeo::random::random_pairs;
use slitherkit::currents::{eigenmeasure, intersection_number, GeodesicCurrent, MonodromyAction};
use slitherkit::hyperbolic::genus2_fuchsian;
use slitherkit::render::{render, Figure, SceneConfig};
use slitherkit::rotation::harness::{check_pair, verify_commutator_bound};
use slitherkit::triples::{proper_discontinuity_probe, TripleBox};
use slitherkit::{rotation_number, LiftedCircleMap, RotationOptions};

fn rotation(c: &mut Criterion) {
    let f = LiftedCircleMap::pl(vec![(0.0, 0.0), (0.3, 0.55), (0.8, 0.9)]).unwrap();
    c.bench_function("rotation_number pl 1e4", |b| b.iter(|| rotation_number(black_box(&f), 10_000)));
    let pairs = random_pairs(1, 8);
    c.bench_function("milnor-wood pair check", |b| {
        b.iter(|| check_pair(0, &pairs[3].0, &pairs[3].1, RotationOptions::default(), None))
    });
    let z = LiftedCircleMap::translation(1);
    c.bench_function("commutator bound 256", |b| {
        b.iter(|| verify_commutator_bound(&pairs[0].0, &pairs[0].1, &z, 256).unwrap())
    });
}

fn geometry(c: &mut Criterion) {
    let group = genus2_fuchsian();
    let rep = group.to_representation().unwrap();
    c.bench_function("convergence probe genus2 len 6", |b| {
        b.iter(|| proper_discontinuity_probe(&rep, &TripleBox::default_box(), 6))
    });
    let g = Arc::new(group);
    let a1 = GeodesicCurrent::class(g.clone(), "a1").unwrap();
    let b1 = GeodesicCurrent::class(g, "a1 b1 b1").unwrap();
    c.bench_function("intersection depth 5", |b| b.iter(|| intersection_number(&a1, &b1, 5).unwrap()));
    let z = MonodromyAction::linear([[2, 1], [1, 1]]).unwrap();
    let mu = GeodesicCurrent::torus_int(1, 0);
    c.bench_function("eigenmeasure N=40", |b| b.iter(|| eigenmeasure(&z, &mu, 40).unwrap()));
}

fn figures(c: &mut Criterion) {
    for f in Figure::ALL {
        let cfg = SceneConfig::default_for(f);
        c.bench_function(&format!("render {}", f.name()), |b| b.iter(|| render(&cfg).unwrap()));
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = rotation, geometry, figures
}
criterion_main!(benches);
