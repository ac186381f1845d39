//! Measured-slack experiments: the additive constants that the theory
//! hides in ≐ and ≤⁺ become signed gaps evaluated exhaustively over a
//! small universe, reported per instance and per string length.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::oracle::ComplexityOracle;
use super::{cantor_pair, exec_program, literal_program};
use crate::bits::BitString;
use crate::error::VmError;
use crate::numeric::{pow2, rational_to_f64};

/// Which identity to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlackIdentity {
    /// `K̂(x,y)` vs `K̂(x) + K̂(y|x*)` (symmetry of information).
    Additivity,
    /// `K̂(x|y*)` vs `K̂(z|y*) + K̂(x|z*)` (directed triangle).
    Triangle,
    /// `I(z:y)` vs `I(x:y) + K̂(q)` for programs q computing z from x*.
    DetNonIncrease,
    /// m̂-expectation of `2^(I(z:y)−I(x:y))` over z (randomized
    /// processing increases information only with small probability).
    RandNonIncrease,
    /// `K̂(K̂(k) | ⟨y,k⟩)` with `k = K̂(y)`: the complexity-of-complexity
    /// corollary, exposed as a measurement only.
    ComplexityOfComplexity,
}

impl SlackIdentity {
    pub fn name(self) -> &'static str {
        match self {
            SlackIdentity::Additivity => "additivity",
            SlackIdentity::Triangle => "triangle",
            SlackIdentity::DetNonIncrease => "det-nonincrease",
            SlackIdentity::RandNonIncrease => "rand-nonincrease",
            SlackIdentity::ComplexityOfComplexity => "k-of-k",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "additivity" => Some(SlackIdentity::Additivity),
            "triangle" => Some(SlackIdentity::Triangle),
            "det-nonincrease" => Some(SlackIdentity::DetNonIncrease),
            "rand-nonincrease" => Some(SlackIdentity::RandNonIncrease),
            "k-of-k" => Some(SlackIdentity::ComplexityOfComplexity),
            _ => None,
        }
    }
}

/// One measured instance: `gap = lhs − rhs` in bits (for
/// RandNonIncrease, the exact expectation instead).
#[derive(Debug, Clone)]
pub struct SlackInstance {
    pub label: String,
    pub gap: f64,
    /// Longest string involved, for gap-growth reporting.
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct SlackReport {
    pub identity: &'static str,
    pub instances: Vec<SlackInstance>,
    pub max_gap: f64,
    pub min_gap: f64,
    /// max gap per longest-string-length.
    pub per_length_max: BTreeMap<usize, f64>,
}

impl SlackReport {
    fn from_instances(identity: &'static str, instances: Vec<SlackInstance>) -> Self {
        let mut max_gap = f64::NEG_INFINITY;
        let mut min_gap = f64::INFINITY;
        let mut per_length_max: BTreeMap<usize, f64> = BTreeMap::new();
        for inst in &instances {
            max_gap = max_gap.max(inst.gap);
            min_gap = min_gap.min(inst.gap);
            per_length_max
                .entry(inst.n)
                .and_modify(|g| *g = g.max(inst.gap))
                .or_insert(inst.gap);
        }
        SlackReport {
            identity,
            instances,
            max_gap,
            min_gap,
            per_length_max,
        }
    }
}

/// Exact expectation data for the randomized-processing experiment.
#[derive(Debug, Clone)]
pub struct RandIncreaseReport {
    /// `(x, y, Σ_z m̂(z|x*)·2^(I(z:y)−I(x:y)))` over the universe.
    pub expectations: Vec<(BitString, BitString, BigRational)>,
    pub max_expectation: BigRational,
}

/// Conditions an oracle must carry to run every slack experiment over
/// `universe`: the strings themselves, their witnesses `y*`, and the
/// `⟨y,k⟩` pairs for the complexity-of-complexity measurement.
pub fn slack_conditions(
    base: &ComplexityOracle,
    universe: &[BitString],
) -> Result<Vec<BitString>, VmError> {
    let eps = base.epsilon_table();
    let mut conds = universe.to_vec();
    for y in universe {
        let star = base.star(y)?;
        conds.push(star);
        let k = eps.khat(y).unwrap() as u64;
        conds.push(cantor_pair(y, &BitString::from_natural(k)));
    }
    conds.sort();
    conds.dedup();
    Ok(conds)
}

/// Builds an oracle ready for every identity over `universe`.
pub fn prepare_slack_oracle(
    machine: super::ToyMachine,
    universe: &[BitString],
) -> Result<ComplexityOracle, VmError> {
    let base = ComplexityOracle::build(machine, &[])?;
    let conds = slack_conditions(&base, universe)?;
    ComplexityOracle::build(machine, &conds)
}

/// Runs one identity exhaustively over the universe.
pub fn slack_experiment(
    oracle: &ComplexityOracle,
    identity: SlackIdentity,
    universe: &[BitString],
) -> Result<SlackReport, VmError> {
    let mut instances = Vec::new();
    match identity {
        SlackIdentity::Additivity => {
            for x in universe {
                let kx = require_khat(oracle, x)?;
                let xstar = oracle.star(x)?;
                let tx = oracle.table(&xstar)?;
                for y in universe {
                    let pair = cantor_pair(x, y);
                    let kpair = require_khat(oracle, &pair)?;
                    let ky_cond = tx.khat(y).ok_or_else(|| VmError::NoProgram(y.clone()))?;
                    instances.push(SlackInstance {
                        label: format!("x={x} y={y}"),
                        gap: kpair as f64 - (kx + ky_cond as i64) as f64,
                        n: x.len().max(y.len()),
                    });
                }
            }
        }
        SlackIdentity::Triangle => {
            for y in universe {
                let ty = oracle.table(&oracle.star(y)?)?;
                for z in universe {
                    let tz = oracle.table(&oracle.star(z)?)?;
                    for x in universe {
                        let lhs = ty.khat(x).ok_or_else(|| VmError::NoProgram(x.clone()))?;
                        let k_z_y = ty.khat(z).ok_or_else(|| VmError::NoProgram(z.clone()))?;
                        let k_x_z = tz.khat(x).ok_or_else(|| VmError::NoProgram(x.clone()))?;
                        instances.push(SlackInstance {
                            label: format!("x={x} y={y} z={z}"),
                            gap: lhs as f64 - (k_z_y + k_x_z) as f64,
                            n: x.len().max(y.len()).max(z.len()),
                        });
                    }
                }
            }
        }
        SlackIdentity::DetNonIncrease => {
            // q = identity (EXEC·HALT): z = x, so the gap is exactly −K̂(q)
            let id_q = exec_program();
            let k_id = require_khat(oracle, &id_q)?;
            for x in universe {
                for y in universe {
                    let ixy = oracle.alg_mutual_info(x, y)?;
                    instances.push(SlackInstance {
                        label: format!("x={x} y={y} q=identity"),
                        gap: -(k_id as f64),
                        n: x.len().max(y.len()),
                    });
                    // q = constant programs emitting z, ignoring x*
                    for z in universe.iter().filter(|z| !z.is_empty()) {
                        let q = literal_program(z);
                        let Some(kq) = oracle.khat(&q) else {
                            continue; // q itself outside the table budget
                        };
                        let izy = oracle.alg_mutual_info(z, y)?;
                        instances.push(SlackInstance {
                            label: format!("x={x} y={y} z={z} q=const"),
                            gap: (izy - ixy - kq as i64) as f64,
                            n: x.len().max(y.len()).max(z.len()),
                        });
                    }
                }
            }
        }
        SlackIdentity::RandNonIncrease => {
            let report = rand_nonincrease(oracle, universe)?;
            for (x, y, e) in &report.expectations {
                instances.push(SlackInstance {
                    label: format!("x={x} y={y}"),
                    gap: rational_to_f64(e),
                    n: x.len().max(y.len()),
                });
            }
        }
        SlackIdentity::ComplexityOfComplexity => {
            for y in universe {
                let k = require_khat(oracle, y)? as u64;
                let kstr = BitString::from_natural(k);
                let kk = require_khat(oracle, &kstr)? as u64;
                let kkstr = BitString::from_natural(kk);
                let cond = cantor_pair(y, &kstr);
                let t = oracle.table(&cond)?;
                let gap = t
                    .khat(&kkstr)
                    .ok_or_else(|| VmError::NoProgram(kkstr.clone()))?;
                instances.push(SlackInstance {
                    label: format!("y={y} k={k} kk={kk}"),
                    gap: gap as f64,
                    n: y.len(),
                });
            }
        }
    }
    Ok(SlackReport::from_instances(identity.name(), instances))
}

/// Exact m̂-expectations of the exponential information increase.
pub fn rand_nonincrease(
    oracle: &ComplexityOracle,
    universe: &[BitString],
) -> Result<RandIncreaseReport, VmError> {
    let mut expectations = Vec::new();
    let mut max_expectation = BigRational::zero();
    for x in universe {
        let xstar = oracle.star(x)?;
        let tx = oracle.table(&xstar)?;
        for y in universe {
            let ixy = oracle.alg_mutual_info(x, y)?;
            let mut total = BigRational::zero();
            for z in universe {
                let izy = oracle.alg_mutual_info(z, y)?;
                let weight = tx.mhat(z);
                total += weight * pow2(izy - ixy);
            }
            if total > max_expectation {
                max_expectation = total.clone();
            }
            expectations.push((x.clone(), y.clone(), total));
        }
    }
    Ok(RandIncreaseReport {
        expectations,
        max_expectation,
    })
}

fn require_khat(oracle: &ComplexityOracle, x: &BitString) -> Result<i64, VmError> {
    oracle
        .khat(x)
        .map(|k| k as i64)
        .ok_or_else(|| VmError::NoProgram(x.clone()))
}
