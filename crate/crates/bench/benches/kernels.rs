//! Benchmarks for the enumeration-heavy kernels: oracle construction,
//! Shannon-Fano coding, brute-force rate-distortion, and the binomial
//! codec.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use kolmolab::bits::{BitReader, BitString};
use kolmolab::coding;
use kolmolab::corpus;
use kolmolab::ratedist;
use kolmolab::toyvm::{ComplexityOracle, ToyMachine};
use kolmolab::ucode;
use num_rational::BigRational;

fn bench_oracle_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for lmax in [16u32, 20] {
        group.bench_function(format!("build_lmax{lmax}"), |b| {
            let machine = ToyMachine::new(lmax, 1000).unwrap();
            b.iter(|| ComplexityOracle::build(machine, black_box(&[])).unwrap());
        });
    }
    group.bench_function("build_lmax16_with_15_conditions", |b| {
        let machine = ToyMachine::new(16, 1000).unwrap();
        let conds = BitString::all_up_to_length(3);
        b.iter(|| ComplexityOracle::build(machine, black_box(&conds)).unwrap());
    });
    group.finish();
}

fn bench_shannon_fano(c: &mut Criterion) {
    let mut rng = corpus::rng(99);
    let dists: Vec<_> = (0..64).map(|_| corpus::random_dist(&mut rng, 64)).collect();
    c.bench_function("shannon_fano_64x64", |b| {
        b.iter(|| {
            for d in &dists {
                black_box(coding::shannon_fano(d).unwrap());
            }
        })
    });
}

fn bench_brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("ratedist");
    group.sample_size(10);
    let instance = ratedist::RDInstance::uniform_set_distortion(4).unwrap();
    let rate = BigRational::from_integer(3.into());
    group.bench_function("brute_force_n4_r3", |b| {
        b.iter(|| ratedist::brute_force_d(black_box(&instance), 1, &rate).unwrap())
    });
    let binary = ratedist::RDInstance::binary_hamming(BigRational::new(1.into(), 2.into())).unwrap();
    group.bench_function("ba_binary_hamming", |b| {
        b.iter(|| {
            ratedist::blahut_arimoto(
                black_box(&binary),
                ratedist::BAQuery::Distortion(0.1),
                1e-9,
                5000,
            )
            .unwrap()
        })
    });
    group.finish();
}

fn bench_binomial_codec(c: &mut Criterion) {
    let mut rng = corpus::rng(7);
    let x = corpus::bernoulli_string(&mut rng, 0.2, 10_000);
    c.bench_function("binomial_encode_10k", |b| {
        b.iter(|| black_box(ucode::binomial_encode(&x)))
    });
    let code = ucode::binomial_encode(&x);
    c.bench_function("binomial_decode_10k", |b| {
        b.iter_batched(
            || code.clone(),
            |code| {
                let mut reader = BitReader::new(&code);
                black_box(ucode::binomial_decode(&mut reader).unwrap())
            },
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    benches,
    bench_oracle_build,
    bench_shannon_fano,
    bench_brute_force,
    bench_binomial_codec
);
criterion_main!(benches);
