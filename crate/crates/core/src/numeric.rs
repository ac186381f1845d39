//! Exact arithmetic helpers: dyadic tests, integer log bounds against
//! rationals, and float conversion of logarithms of big integers.
//!
//! All comparisons between code lengths and `log 1/p` go through the
//! exact integer routines here; floats only appear once a value is
//! reported in bits.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact `2^k` as a rational, `k` possibly negative.
pub fn pow2(k: i64) -> BigRational {
    let one = BigInt::one();
    if k >= 0 {
        BigRational::from_integer(one << k as usize)
    } else {
        BigRational::new(one, BigInt::one() << (-k) as usize)
    }
}

/// `⌈log2 n⌉` for a positive big integer, exact.
pub fn ceil_log2_biguint(n: &BigUint) -> u64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if n.count_ones() == 1 {
        bits - 1
    } else {
        bits
    }
}

/// Smallest `L ≥ 0` with `2^L ≥ 1/p`, i.e. `⌈log2(1/p)⌉`, exact.
/// Requires `0 < p ≤ 1`.
pub fn ceil_log2_inv(p: &BigRational) -> u64 {
    assert!(p.is_positive(), "probability must be positive");
    assert!(*p <= BigRational::one(), "probability must be ≤ 1");
    // 1/p = den/num; ⌈log2(den/num)⌉ = smallest L with num·2^L ≥ den.
    let num = p.numer().magnitude();
    let den = p.denom().magnitude();
    let mut l = den.bits().saturating_sub(num.bits());
    while (num << l) < *den {
        l += 1;
    }
    while l > 0 && (num << (l - 1)) >= *den {
        l -= 1;
    }
    l
}

/// Largest `m ≥ 0` with `2^m ≤ 1/p`, i.e. `⌊log2(1/p)⌋`, exact.
/// Requires `0 < p ≤ 1`.
pub fn floor_log2_inv(p: &BigRational) -> u64 {
    let l = ceil_log2_inv(p);
    if is_pow2_inv(p, l) {
        l
    } else {
        l.saturating_sub(1)
    }
}

fn is_pow2_inv(p: &BigRational, l: u64) -> bool {
    p * pow2(l as i64) == BigRational::one()
}

/// If `p = 2^-k` exactly, returns `k`.
pub fn dyadic_exponent(p: &BigRational) -> Option<u64> {
    if !p.is_positive() || *p > BigRational::one() {
        return None;
    }
    // lowest terms: numerator must be 1, denominator a power of two
    if !p.numer().is_one() {
        return None;
    }
    let den = p.denom().magnitude();
    if den.count_ones() == 1 {
        Some(den.bits() - 1)
    } else {
        None
    }
}

/// `log2` of a positive big integer to f64, good to ~1e-15 relative.
pub fn log2_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if bits <= 53 {
        (n.to_u64().unwrap() as f64).log2()
    } else {
        let shift = bits - 53;
        let top = (n >> shift).to_u64().unwrap();
        (top as f64).log2() + shift as f64
    }
}

/// `log2` of a positive rational to f64.
pub fn log2_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log of non-positive rational");
    log2_biguint(r.numer().magnitude()) - log2_biguint(r.denom().magnitude())
}

/// `p · log2(1/p)` in bits, with the convention `0·log(1/0) = 0`.
pub fn p_log2_inv(p: &BigRational) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    let pf = rational_to_f64(p);
    -pf * log2_rational(p)
}

/// Rational to f64 via the log-safe path (handles huge numerators).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * 2f64.powf(log2_rational(&r.abs()))
}

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
