use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DVector;

use obliq_core::analysis::expected_gain;
use obliq_core::encodings::{build_family, mub_family};
use obliq_core::gf::Gf2m;
use obliq_core::protocol::{honest_basis, posterior};
use obliq_core::qmath::{adjoint_mul, haar_unitary, random_state, ProbabilityDistribution, SeededRng};

fn kron_apply(c: &mut Criterion) {
    let mut group = c.benchmark_group("kron_apply");
    for (k, m) in [(2, 2), (3, 2), (4, 2), (5, 2)] {
        let family = build_family(mub_family(k, m).unwrap()).unwrap();
        let circuit = family.circuit(1).unwrap().clone();
        let v = random_state(family.n(), &mut SeededRng::from_seed(1)).unwrap();
        let v: DVector<_> = v.amplitudes().clone();
        group.bench_with_input(BenchmarkId::from_parameter(family.n()), &v, |b, v| {
            b.iter(|| circuit.apply(black_box(v)).unwrap())
        });
    }
    group.finish();
}

fn haar(c: &mut Criterion) {
    let mut group = c.benchmark_group("haar_unitary");
    group.sample_size(20);
    for dim in [16, 64, 256] {
        let mut rng = SeededRng::from_seed(2);
        group.bench_function(BenchmarkId::from_parameter(dim), |b| {
            b.iter(|| haar_unitary(black_box(dim), &mut rng).unwrap())
        });
    }
    group.finish();
}

fn overlap(c: &mut Criterion) {
    let mut rng = SeededRng::from_seed(3);
    let a = haar_unitary(256, &mut rng).unwrap();
    let b = haar_unitary(256, &mut rng).unwrap();
    let mut group = c.benchmark_group("adjoint_product_256");
    group.sample_size(20);
    group.bench_function("real_split", |bench| bench.iter(|| adjoint_mul(black_box(&a), &b).unwrap()));
    group.bench_function("complex", |bench| bench.iter(|| black_box(&a).adjoint() * &b));
    group.finish();
}

fn gain(c: &mut Criterion) {
    let mut group = c.benchmark_group("expected_gain");
    for (k, m) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
        let family = build_family(mub_family(k, m).unwrap()).unwrap();
        let u = haar_unitary(family.n(), &mut SeededRng::from_seed(4)).unwrap();
        group.bench_function(BenchmarkId::new(format!("k{k}m{m}"), family.n()), |b| {
            b.iter(|| expected_gain(black_box(&u), &family).unwrap())
        });
    }
    group.finish();
}

fn honest_posterior(c: &mut Criterion) {
    let family = build_family(mub_family(5, 2).unwrap()).unwrap();
    let basis = honest_basis(&family, 3).unwrap();
    let prior = ProbabilityDistribution::uniform(family.n()).unwrap();
    c.bench_function("posterior_mub_k5_m2", |b| {
        b.iter(|| posterior(&basis, &family, 2, black_box(77), &prior).unwrap())
    });
}

fn gf_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("gf_mul");
    for m in [4, 8, 16] {
        let field = Gf2m::new(m).unwrap();
        let mask = (1u32 << m) - 1;
        group.bench_function(BenchmarkId::from_parameter(m), |b| {
            b.iter(|| {
                let mut acc = 1u32;
                for x in 1..=256u32 {
                    acc = field.mul(acc, (x * 2_654_435_761) & mask) | 1;
                }
                acc
            })
        });
    }
    group.finish();
}

criterion_group!(benches, kron_apply, haar, overlap, gain, honest_posterior, gf_mul);
criterion_main!(benches);
