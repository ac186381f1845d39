//! A concrete, deterministic, resource-bounded prefix machine.
//!
//! The machine reads its program as a one-way bit stream and halts
//! having consumed exactly the bits it read, so the halting programs
//! form a prefix-free set. Exhaustive enumeration up to a program-length
//! budget yields a computable surrogate K̂ for prefix Kolmogorov
//! complexity, the conditional variant, and the universal weight m̂.
//!
//! Instruction encoding (unary opcode tree, Elias-gamma operands):
//!
//! | bits   | instruction | effect                                          |
//! |--------|-------------|-------------------------------------------------|
//! | `0`    | HALT        | stop                                            |
//! | `10`   | COPY        | append the condition string to the output       |
//! | `110`  | EMIT        | γ(k), then k literal bits: append them          |
//! | `1110` | EXEC        | run the condition as a program (empty condition)|
//! |        |             | and append its output                           |
//! | `1111` | REPEAT      | γ(c), γ(b), then b literal bits: append the     |
//! |        |             | block c times                                   |
//!
//! Executing an instruction costs 1 step plus 1 step per appended
//! output bit; EXEC additionally pays the inner run's steps. A program
//! halts only if HALT executes exactly when the last program bit has
//! been consumed and the step budget is not exceeded.

mod enumerate;
mod oracle;
mod slack;

pub use enumerate::{enumerate_syntactic, SyntacticProgram};
pub use oracle::{
    dyadic_model_code_len, expected_k_report, halting_programs, is_prefix_free, ComplexityOracle,
    ConditionTable, ExpectedKReport, TableEntry,
};
pub use slack::{
    prepare_slack_oracle, rand_nonincrease, slack_conditions, slack_experiment,
    RandIncreaseReport, SlackIdentity, SlackInstance, SlackReport,
};

use crate::bits::{BitReader, BitString};
use crate::error::VmError;

/// Identifies the instruction semantics above; bump on any change.
pub const MACHINE_VERSION: &str = "toyvm-1";

/// Hard ceiling on the enumeration budget (the spec's feasibility bound).
pub const LMAX_LIMIT: u32 = 26;

/// Program-length and step budgets for one machine instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyMachine {
    /// Maximum program length in bits for enumeration.
    pub lmax: u32,
    /// Step budget per run.
    pub steps: u64,
}

impl ToyMachine {
    pub fn new(lmax: u32, steps: u64) -> Result<Self, VmError> {
        if lmax > LMAX_LIMIT {
            return Err(VmError::BudgetInfeasible {
                lmax,
                limit: LMAX_LIMIT,
            });
        }
        assert!(steps >= 1, "step budget must be positive");
        Ok(ToyMachine { lmax, steps })
    }

    /// The default desk-scale machine.
    pub fn standard() -> Self {
        ToyMachine {
            lmax: 20,
            steps: 1000,
        }
    }
}

/// Result of running one program string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    /// HALT executed with every program bit consumed within the budget.
    Halt { output: BitString, steps: u64 },
    /// Step budget exceeded (including diverging EXEC).
    OutOfTime,
    /// An instruction needed more program bits than remained.
    ReadPastEnd,
    /// HALT executed with program bits left over; the consumed prefix is
    /// the halting program, not the full string.
    HaltedEarly { output: BitString, consumed: usize },
}

impl RunOutcome {
    pub fn halted(&self) -> bool {
        matches!(self, RunOutcome::Halt { .. })
    }
}

/// Elias gamma code for n ≥ 1: ⌊log n⌋ zeros, then n in binary.
pub fn gamma_encode(n: u64) -> BitString {
    assert!(n >= 1);
    let width = 64 - n.leading_zeros() as usize;
    let mut bits = Vec::with_capacity(2 * width - 1);
    bits.extend(std::iter::repeat_n(false, width - 1));
    for i in (0..width).rev() {
        bits.push((n >> i) & 1 == 1);
    }
    BitString::from_bools(bits)
}

/// Length of `gamma_encode(n)` in bits.
pub fn gamma_len(n: u64) -> u32 {
    let width = 64 - n.leading_zeros();
    2 * width - 1
}

fn gamma_decode(reader: &mut BitReader) -> Option<u64> {
    let mut zeros = 0usize;
    while !reader.read_bit()? {
        zeros += 1;
        if zeros > 63 {
            return None;
        }
    }
    let mut n: u64 = 1;
    for _ in 0..zeros {
        n = (n << 1) | reader.read_bit()? as u64;
    }
    Some(n)
}

/// Runs `program` with `condition` on the auxiliary read-only tape.
///
/// Deterministic. The condition is never consumed from the program
/// stream; EXEC runs it as a program with the empty condition and the
/// remaining step budget.
pub fn run(program: &BitString, condition: &BitString, budget: u64) -> RunOutcome {
    run_inner(program, condition, budget, false)
}

fn run_inner(program: &BitString, condition: &BitString, budget: u64, nested: bool) -> RunOutcome {
    let mut reader = BitReader::new(program);
    let mut output = BitString::new();
    let mut steps: u64 = 0;

    macro_rules! charge {
        ($cost:expr) => {
            steps += $cost;
            if steps > budget {
                return RunOutcome::OutOfTime;
            }
        };
    }

    loop {
        let b0 = match reader.read_bit() {
            Some(b) => b,
            None => return RunOutcome::ReadPastEnd,
        };
        if !b0 {
            // HALT
            charge!(1);
            return if reader.remaining() == 0 {
                RunOutcome::Halt { output, steps }
            } else {
                RunOutcome::HaltedEarly {
                    output,
                    consumed: reader.pos(),
                }
            };
        }
        let b1 = match reader.read_bit() {
            Some(b) => b,
            None => return RunOutcome::ReadPastEnd,
        };
        if !b1 {
            // COPY
            charge!(1 + condition.len() as u64);
            output.extend(condition);
            continue;
        }
        let b2 = match reader.read_bit() {
            Some(b) => b,
            None => return RunOutcome::ReadPastEnd,
        };
        if !b2 {
            // EMIT
            let k = match gamma_decode(&mut reader) {
                Some(k) => k,
                None => return RunOutcome::ReadPastEnd,
            };
            let payload = match reader.read_bits(k as usize) {
                Some(p) => p,
                None => return RunOutcome::ReadPastEnd,
            };
            charge!(1 + k);
            output.extend(&payload);
            continue;
        }
        let b3 = match reader.read_bit() {
            Some(b) => b,
            None => return RunOutcome::ReadPastEnd,
        };
        if !b3 {
            // EXEC: run the condition as a program under ε. A nested
            // EXEC sees the empty condition and so cannot recurse.
            if nested {
                return RunOutcome::OutOfTime;
            }
            match run_inner(condition, &BitString::new(), budget - steps, true) {
                RunOutcome::Halt {
                    output: inner_out,
                    steps: inner_steps,
                } => {
                    charge!(1 + inner_steps);
                    output.extend(&inner_out);
                }
                // the inner machine never returns control
                _ => return RunOutcome::OutOfTime,
            }
            continue;
        }
        // REPEAT
        let count = match gamma_decode(&mut reader) {
            Some(c) => c,
            None => return RunOutcome::ReadPastEnd,
        };
        let block_len = match gamma_decode(&mut reader) {
            Some(b) => b,
            None => return RunOutcome::ReadPastEnd,
        };
        let block = match reader.read_bits(block_len as usize) {
            Some(b) => b,
            None => return RunOutcome::ReadPastEnd,
        };
        charge!(1 + count * block_len);
        for _ in 0..count {
            output.extend(&block);
        }
    }
}

/// The canonical copy program `COPY·HALT`; its length is the machine's
/// conditional-copy constant c₀.
pub fn copy_program() -> BitString {
    "100".parse().unwrap()
}

/// The canonical condition-evaluation program `EXEC·HALT`; given `y*` on
/// the condition tape it outputs `y`.
pub fn exec_program() -> BitString {
    "11100".parse().unwrap()
}

/// The literal program `EMIT(x)·HALT` printing `x` (x nonempty).
pub fn literal_program(x: &BitString) -> BitString {
    assert!(!x.is_empty());
    let mut p: BitString = "110".parse().unwrap();
    p.extend(&gamma_encode(x.len() as u64));
    p.extend(x);
    p.push(false);
    p
}

/// Length of `literal_program(x)`; the COPY-style overhead over `l(x)`
/// is `literal_overhead(l(x))` bits.
pub fn literal_overhead(len: u64) -> u64 {
    assert!(len >= 1);
    3 + gamma_len(len) as u64 + 1
}

/// Cantor pairing of two strings through the natural-number
/// correspondence; used as the joint object `⟨x,y⟩` for K̂(x,y).
pub fn cantor_pair(x: &BitString, y: &BitString) -> BitString {
    let a = x.to_natural().expect("pair argument too long") as u128;
    let b = y.to_natural().expect("pair argument too long") as u128;
    let z = (a + b) * (a + b + 1) / 2 + b;
    BitString::from_natural(u64::try_from(z).expect("pair out of range"))
}
