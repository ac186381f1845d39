//! Prefix-code machinery: the Kraft inequality, canonical code
//! construction from a length multiset, Shannon-Fano coding, the
//! standard prefix code for the natural numbers, and generic two-part
//! codes over an indexed code family.
//!
//! Probabilities are exact rationals throughout. Comparisons between
//! integer code lengths and `log 1/p` never touch floats: they reduce
//! to integer inequalities via [`crate::numeric`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bits::{BitReader, BitString};
use crate::error::CodingError;
use crate::numeric::{ceil_log2_inv, dyadic_exponent, p_log2_inv, pow2};

/// A finite multiset of codeword lengths, canonicalized ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lengths(Vec<u32>);

impl Lengths {
    pub fn new(mut lengths: Vec<u32>) -> Result<Self, CodingError> {
        if lengths.is_empty() {
            return Err(CodingError::NoLengths);
        }
        if lengths.contains(&0) {
            return Err(CodingError::BadDistribution(
                "codeword lengths must be ≥ 1".into(),
            ));
        }
        if lengths.iter().any(|&l| l > 63) {
            return Err(CodingError::BadDistribution(
                "codeword lengths above 63 bits are not supported".into(),
            ));
        }
        lengths.sort_unstable();
        Ok(Lengths(lengths))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KraftStatus {
    Violates,
    Satisfies,
    Complete,
}

#[derive(Debug, Clone)]
pub struct KraftCheck {
    /// Exact `Σ 2^-l`.
    pub sum: BigRational,
    pub status: KraftStatus,
}

/// Evaluates `Σ 2^-l` exactly and classifies it against 1.
pub fn kraft_check(lengths: &Lengths) -> KraftCheck {
    let sum: BigRational = lengths
        .as_slice()
        .iter()
        .map(|&l| pow2(-(l as i64)))
        .sum();
    let one = BigRational::one();
    let status = if sum > one {
        KraftStatus::Violates
    } else if sum == one {
        KraftStatus::Complete
    } else {
        KraftStatus::Satisfies
    };
    KraftCheck { sum, status }
}

/// A source alphabet with one binary codeword per symbol.
#[derive(Debug, Clone)]
pub struct PrefixCode {
    alphabet: Vec<String>,
    codewords: Vec<BitString>,
    kraft_sum: BigRational,
}

impl PrefixCode {
    /// Builds a code and verifies prefix-freeness and the Kraft bound.
    pub fn new(alphabet: Vec<String>, codewords: Vec<BitString>) -> Result<Self, CodingError> {
        assert_eq!(alphabet.len(), codewords.len());
        let mut sorted: Vec<&BitString> = codewords.iter().collect();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] || w[0].is_proper_prefix_of(w[1]) {
                return Err(CodingError::BadDistribution(format!(
                    "codeword {} is a prefix of {}",
                    w[0], w[1]
                )));
            }
        }
        let kraft_sum: BigRational = codewords.iter().map(|c| pow2(-(c.len() as i64))).sum();
        if kraft_sum > BigRational::one() {
            return Err(CodingError::KraftViolation {
                sum: kraft_sum.to_string(),
            });
        }
        Ok(PrefixCode {
            alphabet,
            codewords,
            kraft_sum,
        })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn codewords(&self) -> &[BitString] {
        &self.codewords
    }

    pub fn kraft_sum(&self) -> &BigRational {
        &self.kraft_sum
    }

    pub fn encode(&self, symbol: &str) -> Option<&BitString> {
        self.alphabet
            .iter()
            .position(|s| s == symbol)
            .map(|i| &self.codewords[i])
    }

    /// Ascending multiset of codeword lengths.
    pub fn length_multiset(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.codewords.iter().map(|c| c.len() as u32).collect();
        v.sort_unstable();
        v
    }

    /// Decodes one symbol off the front of the stream.
    pub fn decode_one<'a>(&'a self, reader: &mut BitReader) -> Result<&'a str, CodingError> {
        let by_word: BTreeMap<&BitString, usize> = self
            .codewords
            .iter()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        let mut cur = BitString::new();
        if let Some(&i) = by_word.get(&cur) {
            return Ok(&self.alphabet[i]);
        }
        loop {
            match reader.read_bit() {
                Some(b) => {
                    cur.push(b);
                    if let Some(&i) = by_word.get(&cur) {
                        return Ok(&self.alphabet[i]);
                    }
                }
                None => {
                    return Err(CodingError::Decode {
                        consumed: reader.consumed(),
                        reason: format!("stream ended inside codeword \"{cur}\""),
                    })
                }
            }
        }
    }

    /// Decodes an entire stream of concatenated codewords.
    pub fn decode_all(&self, bits: &BitString) -> Result<Vec<String>, CodingError> {
        let mut reader = BitReader::new(bits);
        let mut out = Vec::new();
        while reader.remaining() > 0 {
            out.push(self.decode_one(&mut reader)?.to_string());
        }
        Ok(out)
    }

    /// Dump as `symbol<TAB>bitstring` lines.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (sym, code) in self.alphabet.iter().zip(&self.codewords) {
            writeln!(s, "{sym}\t{code}").unwrap();
        }
        s
    }
}

/// Builds the canonical prefix code for a feasible length multiset:
/// lengths are scanned ascending and each receives the lexicographically
/// least codeword of its length that keeps the set prefix-free.
pub fn code_from_lengths(lengths: &Lengths) -> Result<PrefixCode, CodingError> {
    let check = kraft_check(lengths);
    if check.status == KraftStatus::Violates {
        return Err(CodingError::KraftViolation {
            sum: check.sum.to_string(),
        });
    }
    let ls = lengths.as_slice();
    let mut codewords = Vec::with_capacity(ls.len());
    // next free codeword value at the current length, as an integer
    let mut next: u64 = 0;
    let mut prev_len: u32 = ls[0];
    for &l in ls {
        next <<= l - prev_len;
        prev_len = l;
        let mut bits = Vec::with_capacity(l as usize);
        for i in (0..l).rev() {
            bits.push((next >> i) & 1 == 1);
        }
        codewords.push(BitString::from_bools(bits));
        next += 1;
    }
    let alphabet = (0..ls.len()).map(|i| i.to_string()).collect();
    PrefixCode::new(alphabet, codewords)
}

/// A finite probability mass function with exact rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist {
    outcomes: Vec<String>,
    probs: Vec<BigRational>,
}

impl Dist {
    pub fn new(outcomes: Vec<String>, probs: Vec<BigRational>) -> Result<Self, CodingError> {
        if outcomes.is_empty() || outcomes.len() != probs.len() {
            return Err(CodingError::BadDistribution(
                "need one probability per outcome, at least one outcome".into(),
            ));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(CodingError::BadDistribution(
                "negative probability".into(),
            ));
        }
        let total: BigRational = probs.iter().cloned().sum();
        if total != BigRational::one() {
            return Err(CodingError::BadDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Dist { outcomes, probs })
    }

    /// Distribution from integer weights `w_i / Σ w`.
    pub fn from_weights(weights: &[u64]) -> Result<Self, CodingError> {
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return Err(CodingError::BadDistribution("zero total weight".into()));
        }
        let probs = weights
            .iter()
            .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
            .collect();
        let outcomes = (0..weights.len()).map(|i| i.to_string()).collect();
        Dist::new(outcomes, probs)
    }

    pub fn uniform(n: usize) -> Self {
        let probs = vec![BigRational::new(BigInt::one(), BigInt::from(n)); n];
        let outcomes = (0..n).map(|i| i.to_string()).collect();
        Dist { outcomes, probs }
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn prob_of(&self, outcome: &str) -> Option<&BigRational> {
        self.outcomes
            .iter()
            .position(|o| o == outcome)
            .map(|i| &self.probs[i])
    }

    /// True iff every mass is a power of 1/2 (or zero).
    pub fn is_dyadic(&self) -> bool {
        self.probs
            .iter()
            .all(|p| p.is_zero() || dyadic_exponent(p).is_some())
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.probs.iter().map(p_log2_inv).sum()
    }

    /// Parses `symbol<TAB>p/q` lines. A bare integer is read as `n/1`.
    pub fn parse(text: &str) -> Result<Self, CodingError> {
        let mut outcomes = Vec::new();
        let mut probs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (sym, frac) = line.split_once('\t').ok_or_else(|| {
                CodingError::Parse(format!("line {}: expected symbol<TAB>p/q", lineno + 1))
            })?;
            outcomes.push(sym.to_string());
            probs.push(parse_rational(frac.trim()).map_err(|e| {
                CodingError::Parse(format!("line {}: {e}", lineno + 1))
            })?);
        }
        Dist::new(outcomes, probs)
    }

    /// Inverse of [`Dist::parse`].
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (sym, p) in self.outcomes.iter().zip(&self.probs) {
            writeln!(s, "{sym}\t{}/{}", p.numer(), p.denom()).unwrap();
        }
        s
    }
}

/// Parses `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational, CodingError> {
    let bad = |_| CodingError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.trim().parse().map_err(bad)?;
            let den: BigInt = q.trim().parse().map_err(bad)?;
            if den.is_zero() {
                return Err(CodingError::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let num: BigInt = s.trim().parse().map_err(bad)?;
            Ok(BigRational::from_integer(num))
        }
    }
}

/// The Shannon-Fano code: symbol `r` gets the first `⌈log 1/p_r⌉` bits
/// of the binary expansion of the cumulative probability `P_r`, with
/// symbols ordered by decreasing probability (ties by input order).
pub fn shannon_fano(dist: &Dist) -> Result<PrefixCode, CodingError> {
    for (sym, p) in dist.outcomes().iter().zip(dist.probs()) {
        if p.is_zero() {
            return Err(CodingError::ZeroProbability {
                symbol: sym.clone(),
            });
        }
    }
    let mut order: Vec<usize> = (0..dist.len()).collect();
    // stable sort keeps input order on ties
    order.sort_by(|&a, &b| dist.probs()[b].cmp(&dist.probs()[a]));

    let mut codewords = vec![BitString::new(); dist.len()];
    let mut cumulative = BigRational::zero();
    for &i in &order {
        let p = &dist.probs()[i];
        // a sure symbol gets the empty codeword (only legal alone)
        let len = ceil_log2_inv(p);
        codewords[i] = expand_binary(&cumulative, len as usize);
        cumulative += p;
    }
    PrefixCode::new(dist.outcomes().to_vec(), codewords)
}

/// First `len` bits of the binary expansion of `q ∈ [0,1)`.
fn expand_binary(q: &BigRational, len: usize) -> BitString {
    let mut out = BitString::new();
    let mut rest = q.clone();
    let one = BigRational::one();
    for _ in 0..len {
        rest *= BigRational::from_integer(BigInt::from(2));
        if rest >= one {
            out.push(true);
            rest -= &one;
        } else {
            out.push(false);
        }
    }
    out
}

/// Exact expected codeword length `Σ p_x l_x`.
pub fn expected_length(dist: &Dist, code: &PrefixCode) -> BigRational {
    dist.outcomes()
        .iter()
        .zip(dist.probs())
        .map(|(sym, p)| {
            let l = code.encode(sym).expect("symbol must have a codeword").len();
            p * BigRational::from_integer(BigInt::from(l))
        })
        .sum()
}

/// Outcome of the exact Noiseless-Coding-Theorem check `H ≤ L̄ ≤ H+1`.
#[derive(Debug, Clone, Copy)]
pub struct SandwichReport {
    pub lower_holds: bool,
    pub upper_holds: bool,
    /// `L̄ = H` exactly.
    pub left_equality: bool,
    pub dyadic: bool,
}

/// Checks the sandwich in exact arithmetic: per symbol,
/// `log 1/p ≤ l < 1 + log 1/p` reduces to `2^l·p ≥ 1` and `2^(l-1)·p < 1`,
/// and `L̄ = H` iff every per-symbol inequality is tight.
pub fn noiseless_sandwich(dist: &Dist, code: &PrefixCode) -> SandwichReport {
    let one = BigRational::one();
    let mut lower = true;
    let mut upper = true;
    let mut tight = true;
    for (sym, p) in dist.outcomes().iter().zip(dist.probs()) {
        let l = code.encode(sym).expect("codeword").len() as i64;
        let scaled = pow2(l) * p;
        if scaled < one {
            lower = false;
        }
        if pow2(l - 1) * p >= one {
            upper = false;
        }
        if scaled != one {
            tight = false;
        }
    }
    SandwichReport {
        lower_holds: lower,
        upper_holds: upper,
        left_equality: tight,
        dyadic: dist.is_dyadic(),
    }
}

/// `bar(z) = 1^{l(z)} 0 z`, the self-delimiting doubling code.
fn bar(z: &BitString) -> BitString {
    let mut out = BitString::ones(z.len());
    out.push(false);
    out.extend(z);
    out
}

/// The standard prefix code for the natural numbers: `x' = bar(l(x))·x`
/// where `x` is the string paired with `n` and `l(x)` is its length,
/// itself taken as a string. Codeword length is `l(x) + 2·l(l(x)) + 1`.
pub fn encode_natural(n: u64) -> BitString {
    let x = BitString::from_natural(n);
    let len_str = BitString::from_natural(x.len() as u64);
    bar(&len_str).concat(&x)
}

/// Length in bits of `encode_natural(n)` without building it.
pub fn natural_code_len(n: u64) -> u64 {
    let x = BitString::from_natural(n);
    let len_str = BitString::from_natural(x.len() as u64);
    x.len() as u64 + 2 * len_str.len() as u64 + 1
}

/// Self-delimiting encoding of an arbitrary bit string: `bar(l(x))·x`.
/// Agrees with [`encode_natural`] under the string/natural correspondence.
pub fn encode_string_self_delimiting(x: &BitString) -> BitString {
    let len_str = BitString::from_natural(x.len() as u64);
    bar(&len_str).concat(x)
}

/// Streaming inverse of [`encode_natural`]. Returns the decoded natural;
/// the reader is left just past the codeword.
pub fn decode_natural(reader: &mut BitReader) -> Result<u64, CodingError> {
    let x = decode_string_self_delimiting(reader)?;
    x.to_natural().ok_or_else(|| CodingError::Decode {
        consumed: reader.consumed(),
        reason: "decoded string exceeds u64 range".into(),
    })
}

/// Streaming inverse of [`encode_string_self_delimiting`].
pub fn decode_string_self_delimiting(reader: &mut BitReader) -> Result<BitString, CodingError> {
    let fail = |reader: &BitReader, reason: &str| CodingError::Decode {
        consumed: reader.consumed(),
        reason: reason.into(),
    };
    // unary run of 1s gives l(l(x))
    let mut ones = 0usize;
    loop {
        match reader.read_bit() {
            Some(true) => ones += 1,
            Some(false) => break,
            None => return Err(fail(reader, "stream ended inside unary length header")),
        }
    }
    let len_str = reader
        .read_bits(ones)
        .ok_or_else(|| fail(reader, "stream ended inside length field"))?;
    let len = len_str
        .to_natural()
        .ok_or_else(|| fail(reader, "length field exceeds u64 range"))?;
    let x = reader
        .read_bits(len as usize)
        .ok_or_else(|| fail(reader, "stream ended inside payload"))?;
    Ok(x)
}

/// A code assigning binary codewords to values of type `X`, used as a
/// member of a two-part code family.
pub trait SymbolCode<X> {
    /// Codeword for `x`, or `None` when this code does not cover `x`.
    fn encode(&self, x: &X) -> Option<BitString>;
    /// Decodes one codeword off the stream.
    fn decode(&self, reader: &mut BitReader) -> Result<X, CodingError>;
    /// Length function `L_k(x)`.
    fn length(&self, x: &X) -> Option<u64> {
        self.encode(x).map(|c| c.len() as u64)
    }
}

/// Fixed-length identity code on bit strings of exactly `n` bits.
#[derive(Debug, Clone, Copy)]
pub struct FixedLengthCode {
    pub bits: usize,
}

impl SymbolCode<BitString> for FixedLengthCode {
    fn encode(&self, x: &BitString) -> Option<BitString> {
        (x.len() == self.bits).then(|| x.clone())
    }

    fn decode(&self, reader: &mut BitReader) -> Result<BitString, CodingError> {
        reader.read_bits(self.bits).ok_or_else(|| CodingError::Decode {
            consumed: reader.consumed(),
            reason: format!("stream ended inside {}-bit block", self.bits),
        })
    }
}

#[derive(Debug, Clone)]
pub struct TwoPartCodeword {
    /// 1-based index `k*` of the chosen family member.
    pub index: u64,
    pub codeword: BitString,
    /// `L_N(k*) + L_{k*}(x)`, the minimum over the family.
    pub total_len: u64,
}

/// Two-part code over an ordered family: emits `encode_natural(k*)·E_{k*}(x)`
/// where `k*` minimizes `L_N(k) + L_k(x)`, ties broken by least `k`.
pub fn two_part_encode<X>(
    family: &[&dyn SymbolCode<X>],
    x: &X,
) -> Result<TwoPartCodeword, CodingError>
where
    X: std::fmt::Debug,
{
    let mut best: Option<(u64, u64, BitString)> = None;
    for (i, code) in family.iter().enumerate() {
        let k = i as u64 + 1;
        if let Some(body) = code.encode(x) {
            let total = natural_code_len(k) + body.len() as u64;
            let better = match &best {
                None => true,
                Some((t, _, _)) => total < *t,
            };
            if better {
                best = Some((total, k, body));
            }
        }
    }
    match best {
        Some((total_len, index, body)) => Ok(TwoPartCodeword {
            index,
            codeword: encode_natural(index).concat(&body),
            total_len,
        }),
        None => Err(CodingError::Uncovered {
            symbol: format!("{x:?}"),
        }),
    }
}

/// Streaming inverse of [`two_part_encode`].
pub fn two_part_decode<X>(
    family: &[&dyn SymbolCode<X>],
    reader: &mut BitReader,
) -> Result<(u64, X), CodingError> {
    let k = decode_natural(reader)?;
    if k == 0 || k as usize > family.len() {
        return Err(CodingError::Decode {
            consumed: reader.consumed(),
            reason: format!("family index {k} out of range 1..={}", family.len()),
        });
    }
    let x = family[k as usize - 1].decode(reader)?;
    Ok((k, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn lengths(v: &[u32]) -> Lengths {
        Lengths::new(v.to_vec()).unwrap()
    }

    #[test]
    fn kraft_check_examples() {
        let c = kraft_check(&lengths(&[1, 2, 3, 3]));
        assert_eq!(c.status, KraftStatus::Complete);
        assert_eq!(c.sum, BigRational::one());

        let c = kraft_check(&lengths(&[1, 1, 1]));
        assert_eq!(c.status, KraftStatus::Violates);
        assert_eq!(c.sum, rat(3, 2));

        let c = kraft_check(&lengths(&[2, 2, 2]));
        assert_eq!(c.status, KraftStatus::Satisfies);
        assert_eq!(c.sum, rat(3, 4));

        assert!(matches!(
            Lengths::new(vec![]),
            Err(CodingError::NoLengths)
        ));
    }

    #[test]
    fn code_from_lengths_canonical() {
        // derived by lexicographic-least assignment, prefix-freeness
        // re-checked pairwise inside PrefixCode::new
        let code = code_from_lengths(&lengths(&[1, 2, 3, 3])).unwrap();
        let words: Vec<String> = code.codewords().iter().map(|c| c.to_string()).collect();
        assert_eq!(words, ["0", "10", "110", "111"]);

        let code = code_from_lengths(&lengths(&[1])).unwrap();
        assert_eq!(code.codewords()[0].to_string(), "0");

        let code = code_from_lengths(&lengths(&[2, 2, 2, 2])).unwrap();
        let words: Vec<String> = code.codewords().iter().map(|c| c.to_string()).collect();
        assert_eq!(words, ["00", "01", "10", "11"]);

        assert!(code_from_lengths(&lengths(&[1, 1, 1])).is_err());
    }

    #[test]
    fn code_from_lengths_preserves_multiset() {
        let ls = lengths(&[3, 1, 4, 3, 4, 4, 4]);
        let code = code_from_lengths(&ls).unwrap();
        assert_eq!(code.length_multiset(), ls.as_slice());
    }

    #[test]
    fn shannon_fano_uniform_four() {
        let code = shannon_fano(&Dist::uniform(4)).unwrap();
        assert!(code.length_multiset().iter().all(|&l| l == 2));
        let d = Dist::uniform(4);
        assert_eq!(expected_length(&d, &code), rat(2, 1));
    }

    #[test]
    fn shannon_fano_tenths_example() {
        // probs (0.4, 0.3, 0.2, 0.1) → lengths (2,2,3,4), E l = 2.4
        let d = Dist::from_weights(&[4, 3, 2, 1]).unwrap();
        let code = shannon_fano(&d).unwrap();
        assert_eq!(code.length_multiset(), vec![2, 2, 3, 4]);
        assert_eq!(expected_length(&d, &code), rat(24, 10));
        let h = d.entropy();
        assert!((h - 1.84643934).abs() < 1e-6);
        let r = noiseless_sandwich(&d, &code);
        assert!(r.lower_holds && r.upper_holds && !r.left_equality && !r.dyadic);
    }

    #[test]
    fn shannon_fano_dyadic_meets_entropy() {
        let d = Dist::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)],
        )
        .unwrap();
        let code = shannon_fano(&d).unwrap();
        assert_eq!(code.length_multiset(), vec![1, 2, 3, 3]);
        assert_eq!(expected_length(&d, &code), rat(7, 4));
        let r = noiseless_sandwich(&d, &code);
        assert!(r.left_equality && r.dyadic);
    }

    #[test]
    fn shannon_fano_sure_symbol_gets_empty_codeword() {
        let d = Dist::new(vec!["only".into()], vec![rat(1, 1)]).unwrap();
        let code = shannon_fano(&d).unwrap();
        assert!(code.codewords()[0].is_empty());
        assert_eq!(code.kraft_sum(), &BigRational::one());
        let r = noiseless_sandwich(&d, &code);
        assert!(r.lower_holds && r.upper_holds && r.left_equality && r.dyadic);
    }

    #[test]
    fn zero_lengths_rejected() {
        assert!(Lengths::new(vec![0, 2]).is_err());
    }

    #[test]
    fn shannon_fano_rejects_zero_mass() {
        let d = Dist::new(
            vec!["a".into(), "b".into()],
            vec![rat(1, 1), rat(0, 1)],
        )
        .unwrap();
        assert!(matches!(
            shannon_fano(&d),
            Err(CodingError::ZeroProbability { .. })
        ));
    }

    #[test]
    fn natural_code_examples() {
        assert_eq!(encode_natural(0).to_string(), "0");
        // 5 ↔ "10", l = 2 ↔ "1", bar("1") = "101"
        assert_eq!(encode_natural(5).to_string(), "10110");
        assert_eq!(natural_code_len(5), 5);
        assert_eq!(natural_code_len(1), 4);
    }

    #[test]
    fn natural_roundtrip_small() {
        for n in 0..5000u64 {
            let code = encode_natural(n);
            assert_eq!(code.len() as u64, natural_code_len(n));
            let mut r = BitReader::new(&code);
            assert_eq!(decode_natural(&mut r).unwrap(), n);
            assert_eq!(r.remaining(), 0);
        }
    }

    #[test]
    fn natural_decode_bad_stream() {
        let bits: BitString = "111".parse().unwrap();
        let mut r = BitReader::new(&bits);
        let err = decode_natural(&mut r).unwrap_err();
        assert!(matches!(err, CodingError::Decode { .. }));
    }

    #[test]
    fn naturals_concatenate() {
        let mut stream = BitString::new();
        let vals = [0u64, 7, 1, 300, 2, 65535];
        for &v in &vals {
            stream.extend(&encode_natural(v));
        }
        let mut r = BitReader::new(&stream);
        for &v in &vals {
            assert_eq!(decode_natural(&mut r).unwrap(), v);
        }
        assert_eq!(r.remaining(), 0);
    }

    #[test]
    fn two_part_singleton_family() {
        let fixed = FixedLengthCode { bits: 8 };
        let family: Vec<&dyn SymbolCode<BitString>> = vec![&fixed];
        let x = BitString::zeros(8);
        let got = two_part_encode(&family, &x).unwrap();
        assert_eq!(got.index, 1);
        assert_eq!(got.total_len, natural_code_len(1) + 8);
        assert_eq!(got.codeword.len() as u64, got.total_len);
        let mut r = BitReader::new(&got.codeword);
        let (k, y) = two_part_decode(&family, &mut r).unwrap();
        assert_eq!((k, y), (1, x));
    }

    #[test]
    fn two_part_uncovered() {
        let fixed = FixedLengthCode { bits: 8 };
        let family: Vec<&dyn SymbolCode<BitString>> = vec![&fixed];
        let x = BitString::zeros(4);
        assert!(matches!(
            two_part_encode(&family, &x),
            Err(CodingError::Uncovered { .. })
        ));
    }

    #[test]
    fn dist_parse_dump_roundtrip() {
        let text = "a\t1/2\nb\t1/3\nc\t1/6\n";
        let d = Dist::parse(text).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.prob_of("b"), Some(&rat(1, 3)));
        assert_eq!(Dist::parse(&d.dump()).unwrap(), d);
    }

    #[test]
    fn dist_rejects_bad_sum() {
        assert!(Dist::parse("a\t1/2\nb\t1/3\n").is_err());
    }
}
