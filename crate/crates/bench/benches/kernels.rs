use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use schubert_torsion::factor::factorize;
use schubert_torsion::symgroup::Word;
use schubert_torsion::{
    build_x, compute_c_direct, compute_c_euler, fibre_fixed_points, SearchBounds,
};
use schubert_torsion_bench::{example_seed, staircase};

fn bench_divided_differences(c: &mut Criterion) {
    let mut group = c.benchmark_group("divided_difference");
    for d in [4u16, 8, 12] {
        let f = staircase(6, d);
        group.bench_with_input(BenchmarkId::new("single", d), &f, |b, f| {
            b.iter(|| black_box(f).divided_difference(3))
        });
        let w = Word::new(6, vec![1, 2, 3, 4, 5, 1, 2, 3]).unwrap();
        group.bench_with_input(BenchmarkId::new("word8", d), &f, |b, f| {
            b.iter(|| black_box(f).divided_difference_word(&w).unwrap())
        });
    }
    group.finish();
}

fn bench_compute_c(c: &mut Criterion) {
    let seed = example_seed();
    c.bench_function("compute_c_direct/example", |b| {
        b.iter(|| compute_c_direct(black_box(&seed)).unwrap())
    });
    c.bench_function("compute_c_euler/example", |b| {
        b.iter(|| compute_c_euler(black_box(&seed)).unwrap())
    });
    let n4: Vec<_> = schubert_torsion::enumerate_seeds(SearchBounds {
        n_min: 4,
        n_max: 4,
        m_max: 6,
        a_max: 6,
    })
    .collect();
    c.bench_function("compute_c_direct/n4_a6_sweep", |b| {
        b.iter(|| {
            n4.iter()
                .map(|s| compute_c_direct(s).unwrap())
                .collect::<Vec<_>>()
        })
    });
}

fn bench_fibre(c: &mut Criterion) {
    let mut group = c.benchmark_group("fibre_fixed_points");
    group.sample_size(10);
    for pairs in [
        vec![(3, 1), (3, 1)],
        vec![(1, 3), (2, 2)],
        vec![(2, 2), (3, 1), (1, 3)],
    ] {
        let seed = schubert_torsion::SeedData::from_pairs(4, &pairs).unwrap();
        let bx = build_x(&seed);
        group.bench_function(BenchmarkId::from_parameter(seed.compact_blocks()), |b| {
            b.iter(|| fibre_fixed_points(&bx.x_word, &seed.m_set(), &seed.w_a(), u64::MAX).nodes())
        });
    }
    group.finish();
}

fn bench_factor(c: &mut Criterion) {
    // product of two primes just above the trial-division bound
    let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
    c.bench_function("factorize/semiprime", |b| {
        b.iter(|| factorize(black_box(&n)).unwrap())
    });
}

criterion_group!(
    kernels,
    bench_divided_differences,
    bench_compute_c,
    bench_fibre,
    bench_factor
);
criterion_main!(kernels);
