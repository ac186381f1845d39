//! Seeded generators for test corpora: random rational distributions,
//! Kraft-feasible length multisets, joint distributions, and Bernoulli
//! strings. Everything is keyed by an explicit seed so outputs are
//! reproducible byte for byte.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::coding::{Dist, Lengths};
use crate::measures::JointDist;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random exact-rational distribution on ≤ `max_alphabet` outcomes
/// (weights `w_i / Σw` with small integer weights, all positive).
pub fn random_dist(rng: &mut ChaCha8Rng, max_alphabet: usize) -> Dist {
    let k = rng.random_range(2..=max_alphabet);
    let weights: Vec<u64> = (0..k).map(|_| rng.random_range(1..=999)).collect();
    Dist::from_weights(&weights).expect("positive weights")
}

/// Random dyadic distribution over a set of atoms: repeatedly splits
/// probability mass in halves across a random subset.
pub fn random_dyadic_over<T: Clone>(
    rng: &mut ChaCha8Rng,
    atoms: &[T],
    max_support: usize,
) -> Vec<(T, BigRational)> {
    let support = rng.random_range(1..=max_support.min(atoms.len()));
    let mut picks: Vec<usize> = (0..atoms.len()).collect();
    picks.shuffle(rng);
    picks.truncate(support);
    // dyadic weights: give each atom 2^-i for i = 1..support-1 and the
    // last one the remainder 2^-(support-1)
    let mut out = Vec::with_capacity(support);
    for (i, &idx) in picks.iter().enumerate() {
        let exp = if i + 1 == support { i.max(1) } else { i + 1 };
        let exp = if support == 1 { 0 } else { exp };
        let mass = BigRational::new(BigInt::from(1), BigInt::from(1u64) << exp);
        out.push((atoms[idx].clone(), mass));
    }
    out
}

/// Random Kraft-feasible length multiset: draws lengths while the
/// remaining Kraft budget allows, so `Σ 2^-l ≤ 1` always.
pub fn random_feasible_lengths(rng: &mut ChaCha8Rng, max_symbols: usize) -> Lengths {
    let mut budget_num: u128 = 1 << 20; // budget scaled by 2^20
    let mut lengths = Vec::new();
    let symbols = rng.random_range(1..=max_symbols);
    for _ in 0..symbols {
        let l = rng.random_range(1..=12u32);
        let cost = 1u128 << (20 - l.min(20));
        if cost <= budget_num {
            budget_num -= cost;
            lengths.push(l);
        }
    }
    if lengths.is_empty() {
        lengths.push(1);
    }
    Lengths::new(lengths).expect("nonempty")
}

/// Random joint distribution with the given alphabet sizes.
pub fn random_joint(rng: &mut ChaCha8Rng, x_n: usize, y_n: usize) -> JointDist {
    loop {
        let weights: Vec<u64> = (0..x_n * y_n).map(|_| rng.random_range(0..=99)).collect();
        if weights.iter().sum::<u64>() == 0 {
            continue;
        }
        // keep marginals positive so conditionals are well defined
        let ok_rows = (0..x_n).all(|i| (0..y_n).any(|j| weights[i * y_n + j] > 0));
        let ok_cols = (0..y_n).all(|j| (0..x_n).any(|i| weights[i * y_n + j] > 0));
        if ok_rows && ok_cols {
            return JointDist::from_weights(x_n, y_n, &weights).expect("valid joint");
        }
    }
}

/// A Bernoulli(p) string of length `n` (probability of a one is `p`).
pub fn bernoulli_string(rng: &mut ChaCha8Rng, p: f64, n: usize) -> BitString {
    let mut bits = BitString::new();
    for _ in 0..n {
        bits.push(rng.random_bool(p));
    }
    bits
}

/// The alternating string 0101… of length `n`.
pub fn alternating_string(n: usize) -> BitString {
    let mut bits = BitString::new();
    for i in 0..n {
        bits.push(i % 2 == 1);
    }
    bits
}
