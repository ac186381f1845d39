//! Syntactic enumeration of the program space.
//!
//! A syntactic program is a bit string that parses as a complete
//! instruction sequence ending in HALT with no bits left over. Whether
//! it actually halts (step budget, EXEC divergence) depends on the
//! condition and is decided later by running it.

use super::{gamma_encode, gamma_len};
use crate::bits::BitString;

/// A fully parsed candidate program.
#[derive(Debug, Clone)]
pub struct SyntacticProgram {
    pub bits: BitString,
    /// Contains COPY or EXEC, so output and halting depend on the
    /// condition tape.
    pub uses_condition: bool,
}

/// Enumerates every syntactic program of length ≤ `lmax` bits.
///
/// The result is deterministic; callers needing length-lexicographic
/// order sort by `(len, bits)`.
pub fn enumerate_syntactic(lmax: u32) -> Vec<SyntacticProgram> {
    let mut out = Vec::new();
    if lmax == 0 {
        return out;
    }
    let mut prefix = BitString::new();
    descend(&mut prefix, lmax, false, &mut out);
    out
}

fn descend(
    prefix: &mut BitString,
    rem: u32,
    uses_condition: bool,
    out: &mut Vec<SyntacticProgram>,
) {
    debug_assert!(rem >= 1);
    // HALT terminates the program here.
    {
        let mut bits = prefix.clone();
        bits.push(false);
        out.push(SyntacticProgram {
            bits,
            uses_condition,
        });
    }
    // each instruction must leave at least one bit for a final HALT
    // COPY: "10"
    if rem > 2 {
        with_appended(prefix, &[true, false], |p| {
            descend(p, rem - 2, true, out)
        });
    }
    // EMIT: "110" γ(k) payload
    if rem > 5 {
        let mut k = 1u64;
        while 3 + gamma_len(k) + (k as u32) < rem {
            let header_len = 3 + gamma_len(k);
            for payload in BitString::all_of_length(k as usize) {
                with_emit(prefix, k, &payload, |p| {
                    descend(p, rem - header_len - k as u32, uses_condition, out)
                });
            }
            k += 1;
        }
    }
    // EXEC: "1110"
    if rem > 4 {
        with_appended(prefix, &[true, true, true, false], |p| {
            descend(p, rem - 4, true, out)
        });
    }
    // REPEAT: "1111" γ(c) γ(b) block
    if rem > 7 {
        let mut c = 1u64;
        while 4 + gamma_len(c) + 2 < rem {
            let mut b = 1u64;
            while 4 + gamma_len(c) + gamma_len(b) + (b as u32) < rem {
                let header_len = 4 + gamma_len(c) + gamma_len(b);
                for block in BitString::all_of_length(b as usize) {
                    with_repeat(prefix, c, b, &block, |p| {
                        descend(p, rem - header_len - b as u32, uses_condition, out)
                    });
                }
                b += 1;
            }
            c += 1;
        }
    }
}

fn with_appended(prefix: &mut BitString, bits: &[bool], f: impl FnOnce(&mut BitString)) {
    let base = prefix.len();
    for &b in bits {
        prefix.push(b);
    }
    f(prefix);
    truncate(prefix, base);
}

fn with_emit(prefix: &mut BitString, k: u64, payload: &BitString, f: impl FnOnce(&mut BitString)) {
    let base = prefix.len();
    prefix.push(true);
    prefix.push(true);
    prefix.push(false);
    prefix.extend(&gamma_encode(k));
    prefix.extend(payload);
    f(prefix);
    truncate(prefix, base);
}

fn with_repeat(
    prefix: &mut BitString,
    c: u64,
    b: u64,
    block: &BitString,
    f: impl FnOnce(&mut BitString),
) {
    let base = prefix.len();
    for _ in 0..4 {
        prefix.push(true);
    }
    prefix.extend(&gamma_encode(c));
    prefix.extend(&gamma_encode(b));
    prefix.extend(block);
    f(prefix);
    truncate(prefix, base);
}

fn truncate(prefix: &mut BitString, len: usize) {
    prefix.truncate(len);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toyvm::{run, RunOutcome};

    #[test]
    fn small_budget_counts() {
        // length ≤ 3: "0", "100" (COPY·HALT). Nothing else fits.
        let progs = enumerate_syntactic(3);
        let mut strs: Vec<String> = progs.iter().map(|p| p.bits.to_string()).collect();
        strs.sort();
        assert_eq!(strs, ["0", "100"]);
    }

    #[test]
    fn syntactic_set_is_prefix_free() {
        let progs = enumerate_syntactic(12);
        let mut sorted: Vec<&BitString> = progs.iter().map(|p| &p.bits).collect();
        sorted.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        for w in sorted.windows(2) {
            assert!(
                !w[0].is_proper_prefix_of(w[1]),
                "{} is a prefix of {}",
                w[0],
                w[1]
            );
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // every syntactic program of length ≤ 11 must be exactly the set
        // of strings on which the machine halts consuming all bits (with
        // a generous step budget and a condition making EXEC halt)
        let lmax = 11;
        let cond: BitString = "0".parse().unwrap(); // HALT: EXEC succeeds
        let enumerated: std::collections::BTreeSet<String> = enumerate_syntactic(lmax)
            .into_iter()
            .map(|p| p.bits.to_string())
            .collect();
        let mut brute = std::collections::BTreeSet::new();
        for len in 1..=lmax as usize {
            for cand in BitString::all_of_length(len) {
                if matches!(run(&cand, &cond, 1_000_000), RunOutcome::Halt { .. }) {
                    brute.insert(cand.to_string());
                }
            }
        }
        assert_eq!(enumerated, brute);
    }
}
