use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use maj_core::analysis::{expectation_xy_bruteforce, nonlosing_components};
use maj_core::solvers::{brute_force, Requirement};
use maj_core::{Enumeration, Policy, Profile};

fn random_profile(n: usize, t: usize, seed: u64) -> Profile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| Policy::from_bits(&(0..t).map(|_| rng.gen_bool(0.6)).collect::<Vec<_>>()))
        .collect();
    Profile::new(rows).unwrap()
}

fn strategies(c: &mut Criterion) {
    let profile = random_profile(9, 20, 7);
    let par = Enumeration::with_cap(24).parallel();
    let seq = par.sequential();

    let mut group = c.benchmark_group("brute_force_t20");
    group.sample_size(10);
    for (label, cfg) in [("sequential", seq), ("parallel", par)] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &cfg, |b, cfg| {
            b.iter(|| brute_force(black_box(&profile), Requirement::NonLosing, 11, cfg).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("expectation_xy_t20");
    group.sample_size(10);
    for (label, cfg) in [("sequential", seq), ("parallel", par)] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &cfg, |b, cfg| {
            b.iter(|| expectation_xy_bruteforce(black_box(&profile), cfg).unwrap())
        });
    }
    group.finish();

    let small = random_profile(7, 18, 11);
    let mut group = c.benchmark_group("components_t18");
    group.sample_size(10);
    for (label, cfg) in [("sequential", seq), ("parallel", par)] {
        group.bench_with_input(BenchmarkId::from_parameter(label), &cfg, |b, cfg| {
            b.iter(|| nonlosing_components(black_box(&small), cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, strategies);
criterion_main!(benches);
