//! The complexity oracle: per-condition tables mapping output strings to
//! K̂ (minimum halting-program length), m̂ (total halting-program weight
//! Σ 2^-l), and the witness program x* (first shortest in
//! length-lexicographic order).
//!
//! All m̂ values are stored as exact integers scaled by 2^lmax, so Kraft
//! sums and universal weights are exact rationals.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use super::enumerate::{enumerate_syntactic, SyntacticProgram};
use super::{run, RunOutcome, ToyMachine, MACHINE_VERSION};
use crate::bits::BitString;
use crate::coding::encode_string_self_delimiting;
use crate::error::VmError;
use crate::numeric::{dyadic_exponent, p_log2_inv};

/// Table row for one output string under one condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    /// Minimum halting-program length (bits).
    pub khat: u32,
    /// `m̂(x)·2^lmax`, an exact integer.
    pub mhat_scaled: u128,
    /// First shortest halting program in (length, lex) order.
    pub witness: BitString,
}

/// All halting-program statistics for one condition string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionTable {
    condition: BitString,
    lmax: u32,
    entries: BTreeMap<BitString, TableEntry>,
    /// `Σ_halting 2^(lmax−l)`, exact.
    kraft_scaled: u128,
    halting_programs: u64,
}

impl ConditionTable {
    /// Runs every syntactic program under `condition` and aggregates.
    fn build(
        machine: ToyMachine,
        condition: &BitString,
        programs: &[SyntacticProgram],
        shared: Option<&ConditionTable>,
    ) -> ConditionTable {
        let mut entries: BTreeMap<BitString, TableEntry> = BTreeMap::new();
        let mut kraft_scaled: u128 = 0;
        let mut halting = 0u64;

        // Condition-independent programs were already evaluated for ε;
        // fold that table in wholesale when available.
        if let Some(base) = shared {
            entries = base.entries.clone();
            kraft_scaled = base.kraft_scaled;
            halting = base.halting_programs;
        }

        for prog in programs {
            if shared.is_some() && !prog.uses_condition {
                continue;
            }
            if let RunOutcome::Halt { output, .. } = run(&prog.bits, condition, machine.steps) {
                let len = prog.bits.len() as u32;
                let weight = 1u128 << (machine.lmax - len);
                kraft_scaled += weight;
                halting += 1;
                entries
                    .entry(output)
                    .and_modify(|e| {
                        e.mhat_scaled += weight;
                        let candidate = (len, &prog.bits);
                        if candidate < (e.khat, &e.witness) {
                            e.khat = len;
                            e.witness = prog.bits.clone();
                        }
                    })
                    .or_insert_with(|| TableEntry {
                        khat: len,
                        mhat_scaled: weight,
                        witness: prog.bits.clone(),
                    });
            }
        }
        ConditionTable {
            condition: condition.clone(),
            lmax: machine.lmax,
            entries,
            kraft_scaled,
            halting_programs: halting,
        }
    }

    /// Builds the table of condition-independent programs only.
    fn build_shared(machine: ToyMachine, programs: &[SyntacticProgram]) -> ConditionTable {
        let independent: Vec<SyntacticProgram> = programs
            .iter()
            .filter(|p| !p.uses_condition)
            .cloned()
            .collect();
        ConditionTable::build(machine, &BitString::new(), &independent, None)
    }

    pub fn condition(&self) -> &BitString {
        &self.condition
    }

    pub fn khat(&self, x: &BitString) -> Option<u32> {
        self.entries.get(x).map(|e| e.khat)
    }

    /// Exact `m̂(x)`; zero when `x` has no halting program in budget.
    pub fn mhat(&self, x: &BitString) -> BigRational {
        match self.entries.get(x) {
            Some(e) => scaled_to_rational(e.mhat_scaled, self.lmax),
            None => BigRational::from_integer(BigInt::from(0)),
        }
    }

    /// The witness `x*`: first shortest halting program for `x`.
    pub fn shortest_program(&self, x: &BitString) -> Option<&BitString> {
        self.entries.get(x).map(|e| &e.witness)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BitString, &TableEntry)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn halting_program_count(&self) -> u64 {
        self.halting_programs
    }

    /// Exact Kraft sum `Σ_halting 2^-l ≤ 1`.
    pub fn kraft_sum(&self) -> BigRational {
        scaled_to_rational(self.kraft_scaled, self.lmax)
    }

    /// Number of distinct outputs with `khat ≤ t`.
    pub fn count_khat_at_most(&self, t: u32, output_len: Option<usize>) -> u64 {
        self.entries
            .iter()
            .filter(|(x, e)| e.khat <= t && output_len.is_none_or(|n| x.len() == n))
            .count() as u64
    }
}

fn scaled_to_rational(scaled: u128, lmax: u32) -> BigRational {
    BigRational::new(BigInt::from(scaled), BigInt::from(1u8) << lmax as usize)
}

/// The complexity oracle: one [`ConditionTable`] per condition, the
/// empty condition always present (K̂(x) := K̂(x|ε)). Immutable after
/// build; shareable across threads.
#[derive(Debug)]
pub struct ComplexityOracle {
    machine: ToyMachine,
    tables: BTreeMap<BitString, ConditionTable>,
}

impl ComplexityOracle {
    /// Enumerates once and evaluates per condition (in parallel). The
    /// empty condition is always included.
    pub fn build(machine: ToyMachine, conditions: &[BitString]) -> Result<Self, VmError> {
        // budget recheck so stored machines can't sneak past the guard
        let machine = ToyMachine::new(machine.lmax, machine.steps)?;
        let programs = enumerate_syntactic(machine.lmax);
        let shared = ConditionTable::build_shared(machine, &programs);

        let mut conds: Vec<BitString> = conditions.to_vec();
        conds.push(BitString::new());
        conds.sort();
        conds.dedup();

        let tables: BTreeMap<BitString, ConditionTable> = conds
            .par_iter()
            .map(|cond| {
                let table = ConditionTable::build(machine, cond, &programs, Some(&shared));
                (cond.clone(), table)
            })
            .collect();
        Ok(ComplexityOracle { machine, tables })
    }

    /// Builds an oracle whose conditions cover a universe of strings,
    /// the universe members themselves, and the witness `y*` of every
    /// universe member, as the slack experiments need.
    pub fn build_for_universe(
        machine: ToyMachine,
        universe: &[BitString],
    ) -> Result<Self, VmError> {
        let base = ComplexityOracle::build(machine, universe)?;
        let eps = base.epsilon_table();
        let mut conds: Vec<BitString> = universe.to_vec();
        for y in universe {
            if let Some(star) = eps.shortest_program(y) {
                conds.push(star.clone());
            }
        }
        ComplexityOracle::build(machine, &conds)
    }

    pub fn machine(&self) -> ToyMachine {
        self.machine
    }

    /// The unconditional table (empty condition).
    pub fn epsilon_table(&self) -> &ConditionTable {
        self.tables
            .get(&BitString::new())
            .expect("ε table always built")
    }

    pub fn table(&self, condition: &BitString) -> Result<&ConditionTable, VmError> {
        self.tables
            .get(condition)
            .ok_or_else(|| VmError::UnknownCondition(condition.clone()))
    }

    pub fn conditions(&self) -> impl Iterator<Item = &BitString> {
        self.tables.keys()
    }

    /// `K̂(x) = K̂(x|ε)`.
    pub fn khat(&self, x: &BitString) -> Option<u32> {
        self.epsilon_table().khat(x)
    }

    pub fn khat_cond(&self, x: &BitString, condition: &BitString) -> Result<Option<u32>, VmError> {
        Ok(self.table(condition)?.khat(x))
    }

    pub fn mhat(&self, x: &BitString) -> BigRational {
        self.epsilon_table().mhat(x)
    }

    /// `y*`: the first shortest halting program for `y`.
    pub fn star(&self, y: &BitString) -> Result<BitString, VmError> {
        self.epsilon_table()
            .shortest_program(y)
            .cloned()
            .ok_or_else(|| VmError::NoProgram(y.clone()))
    }

    /// Algorithmic mutual information `I(y:x) = K̂(x) − K̂(x|y*)`.
    /// Errors when `y` has no program or `y*` is not a built condition.
    pub fn alg_mutual_info(&self, x: &BitString, y: &BitString) -> Result<i64, VmError> {
        let kx = self.khat(x).ok_or_else(|| VmError::NoProgram(x.clone()))?;
        let ystar = self.star(y)?;
        let kcond = self
            .table(&ystar)?
            .khat(x)
            .ok_or_else(|| VmError::NoProgram(x.clone()))?;
        Ok(kx as i64 - kcond as i64)
    }

    /// Writes every table to a versioned binary file.
    pub fn save(&self, path: &Path) -> Result<(), VmError> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(b"KOLM")?;
        write_u32(&mut f, 1)?; // file format version
        write_bytes(&mut f, MACHINE_VERSION.as_bytes())?;
        write_u32(&mut f, self.machine.lmax)?;
        write_u64(&mut f, self.machine.steps)?;
        write_u64(&mut f, self.tables.len() as u64)?;
        for (cond, table) in &self.tables {
            write_bits(&mut f, cond)?;
            write_u64(&mut f, table.halting_programs)?;
            write_u128(&mut f, table.kraft_scaled)?;
            write_u64(&mut f, table.entries.len() as u64)?;
            for (x, e) in &table.entries {
                write_bits(&mut f, x)?;
                write_u32(&mut f, e.khat)?;
                // m̂ as reduced numerator/denominator
                let m = scaled_to_rational(e.mhat_scaled, self.machine.lmax);
                write_bytes(&mut f, &m.numer().magnitude().to_bytes_le())?;
                write_bytes(&mut f, &m.denom().magnitude().to_bytes_le())?;
                write_bits(&mut f, &e.witness)?;
            }
        }
        Ok(())
    }

    /// Reads a file written by [`ComplexityOracle::save`].
    pub fn load(path: &Path) -> Result<Self, VmError> {
        let mut f = std::fs::File::open(path)?;
        let mut magic = [0u8; 4];
        f.read_exact(&mut magic)?;
        if &magic != b"KOLM" {
            return Err(VmError::BadTableFile("bad magic".into()));
        }
        if read_u32(&mut f)? != 1 {
            return Err(VmError::BadTableFile("unsupported format version".into()));
        }
        let version = read_bytes(&mut f)?;
        if version != MACHINE_VERSION.as_bytes() {
            return Err(VmError::BadTableFile(format!(
                "machine version mismatch: file has {:?}, this build is {MACHINE_VERSION:?}",
                String::from_utf8_lossy(&version)
            )));
        }
        let lmax = read_u32(&mut f)?;
        let steps = read_u64(&mut f)?;
        let machine = ToyMachine::new(lmax, steps)?;
        let n_tables = read_u64(&mut f)?;
        let mut tables = BTreeMap::new();
        for _ in 0..n_tables {
            let cond = read_bits(&mut f)?;
            let halting_programs = read_u64(&mut f)?;
            let kraft_scaled = read_u128(&mut f)?;
            let n_entries = read_u64(&mut f)?;
            let mut entries = BTreeMap::new();
            for _ in 0..n_entries {
                let x = read_bits(&mut f)?;
                let khat = read_u32(&mut f)?;
                let num = BigUint::from_bytes_le(&read_bytes(&mut f)?);
                let den = BigUint::from_bytes_le(&read_bytes(&mut f)?);
                if den.bits() == 0 {
                    return Err(VmError::BadTableFile("zero denominator".into()));
                }
                // reconstruct the scaled integer m̂·2^lmax
                let scaled_big = num << lmax as usize;
                let scaled_q = &scaled_big / &den;
                if &scaled_q * &den != scaled_big {
                    return Err(VmError::BadTableFile("m̂ not a multiple of 2^-lmax".into()));
                }
                let mhat_scaled = u128::try_from(&scaled_q)
                    .map_err(|_| VmError::BadTableFile("m̂ out of range".into()))?;
                let witness = read_bits(&mut f)?;
                entries.insert(
                    x,
                    TableEntry {
                        khat,
                        mhat_scaled,
                        witness,
                    },
                );
            }
            tables.insert(
                cond.clone(),
                ConditionTable {
                    condition: cond,
                    lmax,
                    entries,
                    kraft_scaled,
                    halting_programs,
                },
            );
        }
        if !tables.contains_key(&BitString::new()) {
            return Err(VmError::BadTableFile("missing ε table".into()));
        }
        Ok(ComplexityOracle { machine, tables })
    }
}

/// Collects the halting programs themselves (for prefix-freeness audits).
pub fn halting_programs(machine: ToyMachine, condition: &BitString) -> Vec<BitString> {
    enumerate_syntactic(machine.lmax)
        .into_iter()
        .filter(|p| matches!(run(&p.bits, condition, machine.steps), RunOutcome::Halt { .. }))
        .map(|p| p.bits)
        .collect()
}

/// Checks pairwise prefix-freeness of a program set by sorted adjacency.
pub fn is_prefix_free(programs: &[BitString]) -> bool {
    let mut sorted: Vec<&BitString> = programs.iter().collect();
    sorted.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    sorted
        .windows(2)
        .all(|w| w[0] != w[1] && !w[0].is_proper_prefix_of(w[1]))
}

/// Expected-complexity sandwich data for one distribution:
/// `0 ≤ Σ f(x)·K̂(x) − H(f)`, upper gap reported against a
/// model-code length standing in for K(f).
#[derive(Debug, Clone)]
pub struct ExpectedKReport {
    /// `Σ f(x)·K̂(x)` in bits.
    pub expected_khat: f64,
    /// `H(f)` in bits.
    pub entropy: f64,
    /// `Σ f(x)·K̂(x) − H(f)`; nonnegative because K̂ satisfies Kraft.
    pub gap: f64,
    /// Canonical description length of the distribution itself.
    pub model_code_len: u64,
}

/// Evaluates the sandwich for a dyadic distribution given as
/// `(atom, mass)` pairs. Every atom must be in the table.
pub fn expected_k_report(
    table: &ConditionTable,
    atoms: &[(BitString, BigRational)],
) -> Result<ExpectedKReport, VmError> {
    let mut expected = 0.0f64;
    let mut entropy = 0.0f64;
    for (x, p) in atoms {
        let k = table.khat(x).ok_or_else(|| VmError::NoProgram(x.clone()))?;
        expected += crate::numeric::rational_to_f64(p) * k as f64;
        entropy += p_log2_inv(p);
    }
    Ok(ExpectedKReport {
        expected_khat: expected,
        entropy,
        gap: expected - entropy,
        model_code_len: dyadic_model_code_len(atoms),
    })
}

/// Canonical description length of a dyadic distribution: the atom
/// count, then per atom its self-delimiting string and the exponent of
/// its mass. Stands in for K(f) in expected-complexity comparisons.
pub fn dyadic_model_code_len(atoms: &[(BitString, BigRational)]) -> u64 {
    let mut len = crate::coding::natural_code_len(atoms.len() as u64);
    for (x, p) in atoms {
        let exp = dyadic_exponent(p).expect("dyadic distribution required");
        len += encode_string_self_delimiting(x).len() as u64;
        len += crate::coding::natural_code_len(exp);
    }
    len
}

fn write_u32(w: &mut impl Write, v: u32) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn write_u64(w: &mut impl Write, v: u64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn write_u128(w: &mut impl Write, v: u128) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn write_bytes(w: &mut impl Write, bytes: &[u8]) -> std::io::Result<()> {
    write_u32(w, bytes.len() as u32)?;
    w.write_all(bytes)
}

fn write_bits(w: &mut impl Write, bits: &BitString) -> std::io::Result<()> {
    write_u32(w, bits.len() as u32)?;
    w.write_all(&bits.pack())
}

fn read_u32(r: &mut impl Read) -> Result<u32, VmError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64, VmError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_u128(r: &mut impl Read) -> Result<u128, VmError> {
    let mut b = [0u8; 16];
    r.read_exact(&mut b)?;
    Ok(u128::from_le_bytes(b))
}

fn read_bytes(r: &mut impl Read) -> Result<Vec<u8>, VmError> {
    let len = read_u32(r)? as usize;
    if len > 1 << 28 {
        return Err(VmError::BadTableFile("absurd field length".into()));
    }
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

fn read_bits(r: &mut impl Read) -> Result<BitString, VmError> {
    let nbits = read_u32(r)? as usize;
    let mut buf = vec![0u8; nbits.div_ceil(8)];
    r.read_exact(&mut buf)?;
    Ok(BitString::unpack(&buf, nbits))
}
