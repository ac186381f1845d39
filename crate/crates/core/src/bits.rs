//! Finite binary strings and streaming bit access.
//!
//! Strings order as `ε, 0, 1, 00, 01, 10, 11, 000, …` (length, then
//! lexicographic), which is exactly the numeric order of the standard
//! string/natural correspondence, so `BitString` doubles as a key type
//! for tables indexed by either view.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::CodingError;

/// An immutable-by-convention finite binary string.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    /// All-zero string of length `n`.
    pub fn zeros(n: usize) -> Self {
        BitString {
            bits: vec![false; n],
        }
    }

    /// All-one string of length `n`.
    pub fn ones(n: usize) -> Self {
        BitString {
            bits: vec![true; n],
        }
    }

    /// The string paired with the natural number `n` under the
    /// correspondence (0,ε), (1,"0"), (2,"1"), (3,"00"), …
    pub fn from_natural(n: u64) -> Self {
        assert!(n < u64::MAX, "natural out of range");
        // n+1 in binary with the leading 1 removed.
        let m = n + 1;
        let width = 64 - m.leading_zeros() as usize; // number of bits of m
        let mut bits = Vec::with_capacity(width - 1);
        for i in (0..width - 1).rev() {
            bits.push((m >> i) & 1 == 1);
        }
        BitString { bits }
    }

    /// Inverse of [`BitString::from_natural`]. Fails for strings longer
    /// than 63 bits.
    pub fn to_natural(&self) -> Option<u64> {
        if self.len() > 63 {
            return None;
        }
        let mut m: u64 = 1;
        for &b in &self.bits {
            m = (m << 1) | b as u64;
        }
        Some(m - 1)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn pop(&mut self) -> Option<bool> {
        self.bits.pop()
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    pub fn extend(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// Number of ones.
    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Number of zeros.
    pub fn count_zeros(&self) -> usize {
        self.len() - self.count_ones()
    }

    /// True iff `self` is a proper prefix of `other`.
    pub fn is_proper_prefix_of(&self, other: &BitString) -> bool {
        self.len() < other.len() && other.bits[..self.len()] == self.bits[..]
    }

    /// True iff `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len() <= other.len() && other.bits[..self.len()] == self.bits[..]
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString {
            bits: self.bits[start..end].to_vec(),
        }
    }

    /// All strings of length `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> Vec<BitString> {
        let mut out = Vec::with_capacity(1usize << n);
        let mut cur = BitString::zeros(n);
        loop {
            out.push(cur.clone());
            // increment as a binary counter, msb first
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if !cur.bits[i] {
                    cur.bits[i] = true;
                    for b in &mut cur.bits[i + 1..] {
                        *b = false;
                    }
                    break;
                }
            }
        }
    }

    /// All strings of length ≤ `n`, shortest first.
    pub fn all_up_to_length(n: usize) -> Vec<BitString> {
        (0..=n).flat_map(BitString::all_of_length).collect()
    }

    /// Pack into bytes, most significant bit first. Pairs with
    /// [`BitString::unpack`].
    pub fn pack(&self) -> Vec<u8> {
        let mut bytes = vec![0u8; self.len().div_ceil(8)];
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                bytes[i / 8] |= 0x80 >> (i % 8);
            }
        }
        bytes
    }

    pub fn unpack(bytes: &[u8], nbits: usize) -> Self {
        let mut bits = Vec::with_capacity(nbits);
        for i in 0..nbits {
            bits.push(bytes[i / 8] & (0x80 >> (i % 8)) != 0);
        }
        BitString { bits }
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for BitString {
    type Err = CodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c => return Err(CodingError::BadBit(c)),
            }
        }
        Ok(BitString { bits })
    }
}

/// Cursor over a [`BitString`] for left-to-right decoding.
pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        if self.pos < self.bits.len() {
            let b = self.bits.get(self.pos);
            self.pos += 1;
            Some(b)
        } else {
            None
        }
    }

    pub fn read_bits(&mut self, n: usize) -> Option<BitString> {
        if self.remaining() < n {
            return None;
        }
        let out = self.bits.slice(self.pos, self.pos + n);
        self.pos += n;
        Some(out)
    }

    /// The prefix consumed so far, for decode diagnostics.
    pub fn consumed(&self) -> BitString {
        self.bits.slice(0, self.pos)
    }
}
