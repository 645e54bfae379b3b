use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use curveter_core::{
    connect_to_partition_point, enumerate, rref, FieldSpec, GermAlgebra, Scalar, SmoothingFamily,
    DEFAULT_MAX_CANDIDATES,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(field: FieldSpec, rows: usize, cols: usize, seed: u64) -> Vec<Vec<Scalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| field.from_i64(rng.gen_range(-9..=9)))
                .collect()
        })
        .collect()
}

fn bench_rref(c: &mut Criterion) {
    let mut group = c.benchmark_group("rref");
    for field in [FieldSpec::prime(101), FieldSpec::rationals()] {
        let m = random_matrix(field, 24, 24, 7);
        group.bench_function(format!("24x24 over {field}"), |b| {
            b.iter(|| rref(field, 24, black_box(&m)).unwrap())
        });
    }
    group.finish();
}

fn bench_enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    for (q, cond, delta) in [(2, vec![2, 2, 1], 2), (3, vec![3, 2], 2), (2, vec![5], 3)] {
        let alg = Arc::new(GermAlgebra::full(FieldSpec::prime(q), &cond).unwrap());
        group.bench_function(format!("F_{q} A({cond:?}) delta {delta}"), |b| {
            b.iter(|| {
                enumerate(&alg, delta, DEFAULT_MAX_CANDIDATES)
                    .unwrap()
                    .len()
            })
        });
    }
    group.finish();
}

fn bench_connect(c: &mut Criterion) {
    let f2 = FieldSpec::prime(2);
    let mut points = Vec::new();
    for cond in [vec![2, 3], vec![5], vec![1, 2, 2]] {
        let alg = Arc::new(GermAlgebra::plus(f2, &cond).unwrap());
        for g in 0..alg.dim() {
            points.extend(enumerate(&alg, g, DEFAULT_MAX_CANDIDATES).unwrap());
        }
    }
    c.bench_function("connect all F_2 points of three ambients", |b| {
        b.iter(|| {
            points
                .iter()
                .filter(|r| connect_to_partition_point(r, None).is_ok())
                .count()
        })
    });
}

fn bench_smoothing(c: &mut Criterion) {
    let mut group = c.benchmark_group("smoothing");
    for field in [FieldSpec::prime(5), FieldSpec::rationals()] {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let family = SmoothingFamily::random(field, &[3, 2, 1], &mut rng, false).unwrap();
        group.bench_function(format!("fiber corank (3,2,1) over {field}"), |b| {
            b.iter(|| family.fiber_corank(black_box(6)).unwrap())
        });
        let distinct = SmoothingFamily::random(field, &[3, 2], &mut rng, true).unwrap();
        group.bench_function(format!("germ at gluing (3,2) over {field}"), |b| {
            b.iter(|| distinct.germ_at_gluing(None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_rref,
    bench_enumerate,
    bench_connect,
    bench_smoothing
);
criterion_main!(benches);
