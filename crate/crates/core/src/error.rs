//! Error types shared across the crate.

use thiserror::Error;

use crate::bits::BitString;

/// Errors from the prefix-coding operations.
#[derive(Debug, Error)]
pub enum CodingError {
    #[error("no lengths")]
    NoLengths,
    #[error("Kraft inequality violated: sum {sum} > 1")]
    KraftViolation { sum: String },
    #[error("zero-probability symbol {symbol:?} cannot receive a codeword")]
    ZeroProbability { symbol: String },
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error("decode failed after consuming prefix \"{consumed}\": {reason}")]
    Decode { consumed: BitString, reason: String },
    #[error("no code in the family covers {symbol:?}")]
    Uncovered { symbol: String },
    #[error("invalid bit character {0:?}")]
    BadBit(char),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Errors from the information-measure operations.
#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("invalid joint distribution: {0}")]
    BadJoint(String),
    #[error("conditioning event has zero probability: {0}")]
    ZeroProbabilityEvent(String),
    #[error("alphabets not aligned: {0}")]
    AlphabetMismatch(String),
}

/// Errors from the toy machine and its oracle.
#[derive(Debug, Error)]
pub enum VmError {
    #[error("enumeration budget infeasible: L_max = {lmax} exceeds limit {limit}")]
    BudgetInfeasible { lmax: u32, limit: u32 },
    #[error("condition {0:?} not in oracle table")]
    UnknownCondition(BitString),
    #[error("string {0:?} has no halting program within budget")]
    NoProgram(BitString),
    #[error("oracle file corrupt: {0}")]
    BadTableFile(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Errors from algorithmic-statistics operations.
#[derive(Debug, Error)]
pub enum StatError {
    #[error("string not in model: {0}")]
    NotInModel(String),
    #[error("no optimal set within slack {slack}; best two-part length {best_two_part} bits")]
    NoOptimalSet { slack: f64, best_two_part: f64 },
    #[error("f(x) = 0: threshold construction undefined")]
    ZeroMass,
    #[error("sequential statistic violates condition {condition}: {detail}")]
    NotSequential { condition: &'static str, detail: String },
    #[error("invalid parameter family: {0}")]
    BadFamily(String),
}

/// Errors from the rate-distortion engine.
#[derive(Debug, Error)]
pub enum RdError {
    #[error("codebook enumeration too large: {count} exceeds guard {guard}")]
    BudgetGuard { count: u128, guard: u128 },
    #[error("Blahut-Arimoto did not converge in {iters} iterations (last R={rate}, D={distortion})")]
    NoConvergence { iters: usize, rate: f64, distortion: f64 },
    #[error("invalid instance: {0}")]
    BadInstance(String),
}
