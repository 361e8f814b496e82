use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use reflexa_bench::{square, SEED};
use reflexa_core::bialgebra::{bialgebra_isomorphic, dual_bialgebra, function_bialgebra, group_bialgebra, GroupTable};
use reflexa_core::findual::{Model, RecursiveFunctional};
use reflexa_core::nat::{check_reflexive, nat_hom_space};
use reflexa_core::tower::{product_decomposition, stabilized_images};
use reflexa_core::{random, FinModule, Field, FunctorOnUniverse, Universe};

fn bench_rref(c: &mut Criterion) {
    let mut group = c.benchmark_group("rref");
    for field in [Field::Rational, Field::Prime(7)] {
        for n in [8, 16, 32] {
            let m = square(field, n);
            group.bench_with_input(BenchmarkId::new(field.to_string(), n), &m, |b, m| b.iter(|| black_box(m.rref())));
        }
    }
    group.finish();
}

fn bench_solver(c: &mut Criterion) {
    let u = Arc::new(Universe::reference(Field::Rational).unwrap());
    let qc = |r| FunctorOnUniverse::quasicoherent(&FinModule::new(Field::Rational, r), &u).unwrap();
    let mut group = c.benchmark_group("nat_hom_space");
    for r in [1, 2, 3] {
        let (f, g) = (qc(r), qc(r));
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, _| b.iter(|| nat_hom_space(&f, &g).unwrap()));
    }
    group.finish();
    let f = qc(2);
    c.bench_function("check_reflexive rank 2", |b| b.iter(|| check_reflexive(&f).unwrap()));
}

fn bench_towers(c: &mut Criterion) {
    let mut rng = random::rng(SEED);
    let towers: Vec<_> = (0..32).map(|_| random::tower(&mut rng, Field::Prime(7), 6, 5)).collect();
    c.bench_function("stabilize and decompose 32 towers", |b| {
        b.iter(|| {
            for t in &towers {
                let s = stabilized_images(t).unwrap();
                black_box(product_decomposition(&s.tower).unwrap());
            }
        })
    });
}

fn bench_bialgebras(c: &mut Criterion) {
    let s3 = GroupTable::symmetric3();
    let b = group_bialgebra(Field::Rational, &s3).unwrap();
    c.bench_function("dual K[S3]", |bench| bench.iter(|| dual_bialgebra(&b).unwrap()));
    let z2 = GroupTable::cyclic(2);
    let (g, f) = (group_bialgebra(Field::Rational, &z2).unwrap(), function_bialgebra(Field::Rational, &z2).unwrap());
    c.bench_function("iso K[Z2] K^Z2", |bench| bench.iter(|| bialgebra_isomorphic(&g, &f).unwrap()));
}

fn bench_findual(c: &mut Criterion) {
    let mut rng = random::rng(SEED);
    let pairs: Vec<_> = (0..16)
        .map(|_| {
            (
                random::functional(&mut rng, Field::Prime(101), Model::Primitive, 4),
                random::functional(&mut rng, Field::Prime(101), Model::Primitive, 4),
            )
        })
        .collect();
    c.bench_function("16 primitive products", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(x.multiply(y).unwrap());
            }
        })
    });
    let fib = RecursiveFunctional::fibonacci(Field::Rational, Model::Grouplike);
    c.bench_function("fibonacci squared", |b| b.iter(|| fib.multiply(&fib).unwrap()));
}

criterion_group!(benches, bench_rref, bench_solver, bench_towers, bench_bialgebras, bench_findual);
criterion_main!(benches);
