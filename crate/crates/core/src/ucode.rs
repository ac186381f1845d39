//! Universal codes: the binomial (type-class) two-part code with exact
//! big-integer ranking, two-part universal codes over enumerated
//! families of sequential sources, and redundancy measurement in the
//! individual-sequence and expected senses.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::{BitReader, BitString};
use crate::coding::{
    decode_natural, encode_natural, natural_code_len, parse_rational, SymbolCode,
};
use crate::error::CodingError;
use crate::numeric::{binomial, ceil_log2_biguint, ceil_log2_inv};

/// Rank of `x` among the length-`n` strings with the same number of
/// zeros, in lexicographic order (exact, big-integer).
pub fn type_class_rank(x: &BitString) -> BigUint {
    let n = x.len() as u64;
    let mut zeros = x.count_zeros() as u64;
    let mut rank = BigUint::zero();
    // cur = C(r−1, zeros−1) where r = remaining positions
    let mut r = n;
    let mut cur = if zeros == 0 {
        BigUint::zero()
    } else {
        binomial(n - 1, zeros - 1)
    };
    for bit in x.iter() {
        // strings placing a 0 here precede strings placing a 1
        if bit {
            rank += &cur;
            // C(r−2, zeros−1) = cur · (r−zeros) / (r−1)
            if r >= 2 && !cur.is_zero() {
                cur = cur * BigUint::from(r - zeros) / BigUint::from(r - 1);
            }
        } else {
            // C(r−2, zeros−2) = cur · (zeros−1) / (r−1)
            if r >= 2 {
                cur = if zeros >= 2 {
                    cur * BigUint::from(zeros - 1) / BigUint::from(r - 1)
                } else {
                    BigUint::zero()
                };
            }
            zeros -= 1;
        }
        r -= 1;
    }
    rank
}

/// Inverse of [`type_class_rank`]: the `rank`-th string of length `n`
/// with `zeros` zeros.
pub fn type_class_unrank(n: u64, zeros: u64, rank: &BigUint) -> BitString {
    let mut out = BitString::new();
    let mut rank = rank.clone();
    let mut z = zeros;
    let mut cur = if z == 0 {
        BigUint::zero()
    } else {
        binomial(n - 1, z - 1)
    };
    let mut r = n;
    while r > 0 {
        if z > 0 && rank < cur {
            out.push(false);
            if r >= 2 {
                cur = if z >= 2 {
                    cur * BigUint::from(z - 1) / BigUint::from(r - 1)
                } else {
                    BigUint::zero()
                };
            }
            z -= 1;
        } else {
            rank -= &cur;
            out.push(true);
            if r >= 2 && !cur.is_zero() {
                cur = cur * BigUint::from(r - z) / BigUint::from(r - 1);
            }
        }
        r -= 1;
    }
    out
}

/// Codeword length of the binomial code:
/// `L_N(n) + L_N(n₀) + ⌈log C(n, n₀)⌉` with zero index bits on
/// single-element type classes.
pub fn binomial_code_len(n: u64, zeros: u64) -> u64 {
    let c = binomial(n, zeros);
    let index_bits = if c.is_one() { 0 } else { ceil_log2_biguint(&c) };
    natural_code_len(n) + natural_code_len(zeros) + index_bits
}

/// Two-part type-class encoding: `encode_natural(n) ·
/// encode_natural(n₀) · index`, with the index written in exactly
/// `⌈log C(n,n₀)⌉` bits by combinatorial ranking.
pub fn binomial_encode(x: &BitString) -> BitString {
    let n = x.len() as u64;
    let zeros = x.count_zeros() as u64;
    let mut out = encode_natural(n);
    out.extend(&encode_natural(zeros));
    let c = binomial(n, zeros);
    if !c.is_one() {
        let width = ceil_log2_biguint(&c);
        let rank = type_class_rank(x);
        for i in (0..width).rev() {
            out.push(rank.bit(i));
        }
    }
    debug_assert_eq!(out.len() as u64, binomial_code_len(n, zeros));
    out
}

/// Streaming inverse of [`binomial_encode`].
pub fn binomial_decode(reader: &mut BitReader) -> Result<BitString, CodingError> {
    let n = decode_natural(reader)?;
    let zeros = decode_natural(reader)?;
    if zeros > n {
        return Err(CodingError::Decode {
            consumed: reader.consumed(),
            reason: format!("type class ({zeros} zeros of {n}) is empty"),
        });
    }
    let c = binomial(n, zeros);
    let mut rank = BigUint::zero();
    if !c.is_one() {
        let width = ceil_log2_biguint(&c);
        let payload = reader.read_bits(width as usize).ok_or_else(|| {
            CodingError::Decode {
                consumed: reader.consumed(),
                reason: "stream ended inside type-class index".into(),
            }
        })?;
        for bit in payload.iter() {
            rank = (rank << 1) + BigUint::from(bit as u8);
        }
        if rank >= c {
            return Err(CodingError::Decode {
                consumed: reader.consumed(),
                reason: "type-class index out of range".into(),
            });
        }
    }
    Ok(type_class_unrank(n, zeros, &rank))
}

/// The binomial code as a family member for generic two-part coding.
#[derive(Debug, Clone, Copy)]
pub struct BinomialCode;

impl SymbolCode<BitString> for BinomialCode {
    fn encode(&self, x: &BitString) -> Option<BitString> {
        (!x.is_empty()).then(|| binomial_encode(x))
    }

    fn decode(&self, reader: &mut BitReader) -> Result<BitString, CodingError> {
        binomial_decode(reader)
    }
}

/// One sequential source with exact rational marginals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequentialSource {
    /// i.i.d. bits with `P(1) = p`.
    Bernoulli { p: BigRational },
    /// Order-1 Markov chain: initial `P(x₁=1)`, transitions
    /// `P(1|prev=0)` and `P(1|prev=1)`.
    Markov {
        p_start: BigRational,
        p_after_zero: BigRational,
        p_after_one: BigRational,
    },
}

impl SequentialSource {
    /// Exact marginal mass `f^(n)(x)` for `n = l(x)`.
    pub fn mass(&self, x: &BitString) -> BigRational {
        let one = BigRational::one();
        match self {
            SequentialSource::Bernoulli { p } => {
                let q = &one - p;
                x.iter()
                    .map(|b| if b { p.clone() } else { q.clone() })
                    .product()
            }
            SequentialSource::Markov {
                p_start,
                p_after_zero,
                p_after_one,
            } => {
                let mut mass = BigRational::one();
                let mut prev: Option<bool> = None;
                for b in x.iter() {
                    let p1 = match prev {
                        None => p_start,
                        Some(false) => p_after_zero,
                        Some(true) => p_after_one,
                    };
                    mass *= if b { p1.clone() } else { &one - p1 };
                    prev = Some(b);
                }
                mass
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            SequentialSource::Bernoulli { p } => format!("bernoulli({p})"),
            SequentialSource::Markov {
                p_start,
                p_after_zero,
                p_after_one,
            } => format!("markov({p_start};{p_after_zero};{p_after_one})"),
        }
    }

    /// Exact entropy of the marginal `f^(n)` by direct enumeration.
    pub fn marginal_entropy(&self, n: usize) -> f64 {
        BitString::all_of_length(n)
            .iter()
            .map(|x| crate::numeric::p_log2_inv(&self.mass(x)))
            .sum()
    }
}

/// An indexed family of sequential sources, the comparison class for
/// universal coding.
#[derive(Debug, Clone)]
pub struct SourceFamily {
    sources: Vec<SequentialSource>,
}

impl SourceFamily {
    pub fn new(sources: Vec<SequentialSource>) -> Result<Self, CodingError> {
        if sources.is_empty() {
            return Err(CodingError::Parse("empty source family".into()));
        }
        let valid = |p: &BigRational| *p >= BigRational::zero() && *p <= BigRational::one();
        for s in &sources {
            let ok = match s {
                SequentialSource::Bernoulli { p } => valid(p),
                SequentialSource::Markov {
                    p_start,
                    p_after_zero,
                    p_after_one,
                } => valid(p_start) && valid(p_after_zero) && valid(p_after_one),
            };
            if !ok {
                return Err(CodingError::Parse(format!(
                    "parameters outside [0,1] in {}",
                    s.label()
                )));
            }
        }
        Ok(SourceFamily { sources })
    }

    /// The Bernoulli grid p ∈ {1/10, …, 9/10}.
    pub fn bernoulli_grid() -> Self {
        let sources = (1..=9)
            .map(|i| SequentialSource::Bernoulli {
                p: BigRational::new(BigInt::from(i), BigInt::from(10)),
            })
            .collect();
        SourceFamily { sources }
    }

    pub fn sources(&self) -> &[SequentialSource] {
        &self.sources
    }

    /// Parses a family spec file: one source per line,
    /// `bernoulli p/q` or `markov p1 p01 p11`.
    pub fn parse(text: &str) -> Result<Self, CodingError> {
        let mut sources = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let kind = toks.next().unwrap();
            let mut param = || -> Result<BigRational, CodingError> {
                parse_rational(toks.next().ok_or_else(|| {
                    CodingError::Parse(format!("line {}: missing parameter", lineno + 1))
                })?)
            };
            match kind {
                "bernoulli" => sources.push(SequentialSource::Bernoulli { p: param()? }),
                "markov" => sources.push(SequentialSource::Markov {
                    p_start: param()?,
                    p_after_zero: param()?,
                    p_after_one: param()?,
                }),
                other => {
                    return Err(CodingError::Parse(format!(
                        "line {}: unknown source kind {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        SourceFamily::new(sources)
    }
}

/// Outcome of the two-part universal code on one string.
#[derive(Debug, Clone)]
pub struct TwoPartChoice {
    /// 1-based index of the chosen source.
    pub k_star: u64,
    /// `L̃(x) = L_N(n) + L_N(k*) + ⌈log 1/f_{k*}(x)⌉`.
    pub total_len: u64,
    /// Shannon-Fano lengths `L_k(x)` per family member (`None` when the
    /// source gives `x` probability zero).
    pub member_lens: Vec<Option<u64>>,
}

/// Chooses `k*` minimizing `L_N(k) + ⌈log 1/f_k(x)⌉` (ties to least k)
/// and accounts the `L_N(n)` header. Guarantees
/// `L̃(x) ≤ L_k(x) + L_N(k) + L_N(n)` for every member `k`.
pub fn universal_two_part(
    family: &SourceFamily,
    x: &BitString,
) -> Result<TwoPartChoice, CodingError> {
    let mut member_lens = Vec::with_capacity(family.sources().len());
    let mut best: Option<(u64, u64)> = None;
    for (i, source) in family.sources().iter().enumerate() {
        let k = i as u64 + 1;
        let mass = source.mass(x);
        let len = if mass.is_zero() {
            None
        } else {
            Some(ceil_log2_inv(&mass))
        };
        member_lens.push(len);
        if let Some(l) = len {
            let with_index = natural_code_len(k) + l;
            if best.is_none_or(|(t, _)| with_index < t) {
                best = Some((with_index, k));
            }
        }
    }
    let (body, k_star) = best.ok_or_else(|| CodingError::Uncovered {
        symbol: x.to_string(),
    })?;
    Ok(TwoPartChoice {
        k_star,
        total_len: natural_code_len(x.len() as u64) + body,
        member_lens,
    })
}

/// Per-string redundancy data against the comparison family.
#[derive(Debug, Clone)]
pub struct StringRedundancy {
    pub label: String,
    pub n: usize,
    pub total_len: u64,
    pub k_star: u64,
    /// `L̃(x) − min_k L_k(x)`.
    pub redundancy: u64,
}

#[derive(Debug, Clone)]
pub struct UCodeReport {
    pub per_string: Vec<StringRedundancy>,
    pub max_redundancy: u64,
}

/// Evaluates the two-part code on a corpus and verifies the per-string
/// universality bound against every family member exactly.
pub fn redundancy_report(
    family: &SourceFamily,
    corpus: &[(String, BitString)],
) -> Result<UCodeReport, CodingError> {
    if corpus.is_empty() {
        return Err(CodingError::Parse("empty corpus".into()));
    }
    let mut per_string = Vec::with_capacity(corpus.len());
    let mut max_redundancy = 0;
    for (label, x) in corpus {
        let choice = universal_two_part(family, x)?;
        let header = natural_code_len(x.len() as u64);
        for (i, len) in choice.member_lens.iter().enumerate() {
            if let Some(l) = len {
                let bound = l + natural_code_len(i as u64 + 1) + header;
                assert!(
                    choice.total_len <= bound,
                    "universality bound failed for {label} against member {}",
                    i + 1
                );
            }
        }
        let best_member = choice
            .member_lens
            .iter()
            .flatten()
            .min()
            .copied()
            .expect("some member covers x");
        let redundancy = choice.total_len - best_member;
        max_redundancy = max_redundancy.max(redundancy);
        per_string.push(StringRedundancy {
            label: label.clone(),
            n: x.len(),
            total_len: choice.total_len,
            k_star: choice.k_star,
            redundancy,
        });
    }
    Ok(UCodeReport {
        per_string,
        max_redundancy,
    })
}

/// Exact expected two-part length `E_{f_k} L̃(X_{1:n})` by enumeration.
pub fn expected_two_part_len(
    family: &SourceFamily,
    member: usize,
    n: usize,
) -> Result<f64, CodingError> {
    let source = &family.sources()[member];
    let mut total = 0.0;
    for x in BitString::all_of_length(n) {
        let mass = source.mass(&x);
        if mass.is_zero() {
            continue;
        }
        let choice = universal_two_part(family, &x)?;
        total += crate::numeric::rational_to_f64(&mass) * choice.total_len as f64;
    }
    Ok(total)
}

/// Writes a bit string as the wire format: 4-byte little-endian bit
/// count, then the packed bits (MSB first within each byte).
pub fn bitstream_to_bytes(bits: &BitString) -> Vec<u8> {
    let mut out = (bits.len() as u32).to_le_bytes().to_vec();
    out.extend_from_slice(&bits.pack());
    out
}

/// Inverse of [`bitstream_to_bytes`].
pub fn bitstream_from_bytes(bytes: &[u8]) -> Result<BitString, CodingError> {
    if bytes.len() < 4 {
        return Err(CodingError::Parse("bitstream file too short".into()));
    }
    let nbits = u32::from_le_bytes(bytes[..4].try_into().unwrap()) as usize;
    if bytes.len() < 4 + nbits.div_ceil(8) {
        return Err(CodingError::Parse("bitstream file truncated".into()));
    }
    Ok(BitString::unpack(&bytes[4..], nbits))
}
