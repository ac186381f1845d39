//! Algorithmic statistics over explicit model families: randomness
//! deficiency, typicality, optimal sets, minimal sufficient statistics,
//! the structure functions h_x, λ_x, β_x, and the finite-set ↔
//! probability-model conversions.
//!
//! K(S) is replaced by the length of an explicit prefix code over each
//! family, and K(x|S) by K̂(x | canonical listing of S), so every
//! quantity is computable. Deficiencies are reported raw: at desk scale
//! they sit a machine-constant below their theoretical values, and
//! clamping would hide exactly the overheads the experiments measure.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bits::{BitReader, BitString};
use crate::coding::{decode_natural, encode_natural, encode_string_self_delimiting, natural_code_len};
use crate::error::{StatError, VmError};
use crate::numeric::{floor_log2_inv, log2_biguint};
use crate::toyvm::{ComplexityOracle, ConditionTable};

/// A finite set of same-length strings together with its code under the
/// owning family's prefix code; the code length stands in for K(S).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSetModel {
    label: String,
    /// Lexicographically sorted, all of the same length.
    elements: Vec<BitString>,
    model_code: BitString,
}

impl FiniteSetModel {
    fn new(label: impl Into<String>, mut elements: Vec<BitString>, model_code: BitString) -> Self {
        elements.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        elements.dedup();
        assert!(!elements.is_empty(), "models must be nonempty");
        FiniteSetModel {
            label: label.into(),
            elements,
            model_code,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn elements(&self) -> &[BitString] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &BitString) -> bool {
        self.elements
            .binary_search_by(|e| e.as_slice().cmp(x.as_slice()))
            .is_ok()
    }

    pub fn model_code(&self) -> &BitString {
        &self.model_code
    }

    /// Model description length in bits (the K(S) surrogate).
    pub fn model_cost(&self) -> u64 {
        self.model_code.len() as u64
    }

    /// `log2 |S|`, exact for power-of-two sizes.
    pub fn log_size(&self) -> f64 {
        log2_biguint(&num_bigint::BigUint::from(self.elements.len()))
    }

    /// The canonical listing: elements concatenated in lexicographic
    /// order. This string is what conditional complexities condition on.
    pub fn canonical_listing(&self) -> BitString {
        let mut out = BitString::new();
        for e in &self.elements {
            out.extend(e);
        }
        out
    }
}

/// The shipped model families. Each enumerates prefix-free model codes
/// and always contains the full set {0,1}^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFamily {
    /// Only {0,1}^n.
    Full,
    /// {0,1}^n plus every singleton {x}.
    Singletons,
    /// Prefix-mask sets A_p = { p·suffix } for p ∈ {0,1}^r, 1 ≤ r ≤ n.
    Masks,
    /// Type classes S_{n,k} of strings with exactly k ones.
    TypeClasses,
    /// Strings whose even positions (0-based) follow a fixed pattern.
    Parity,
    /// Hamming balls of each center and radius.
    HammingBalls,
}

impl ModelFamily {
    pub fn all() -> [ModelFamily; 6] {
        [
            ModelFamily::Full,
            ModelFamily::Singletons,
            ModelFamily::Masks,
            ModelFamily::TypeClasses,
            ModelFamily::Parity,
            ModelFamily::HammingBalls,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelFamily::Full => "full",
            ModelFamily::Singletons => "singletons",
            ModelFamily::Masks => "masks",
            ModelFamily::TypeClasses => "typeclass",
            ModelFamily::Parity => "parity",
            ModelFamily::HammingBalls => "hamming",
        }
    }

    pub fn parse(s: &str) -> Option<ModelFamily> {
        ModelFamily::all().into_iter().find(|f| f.name() == s)
    }

    /// Every model at string length `n`, in enumeration order. The full
    /// set comes first with code `0·L_N(n)`; family-specific models
    /// follow under the `1` branch, so codes are prefix-free.
    pub fn enumerate(&self, n: usize) -> Vec<FiniteSetModel> {
        assert!((1..=16).contains(&n), "family enumeration is desk-scale");
        let all = BitString::all_of_length(n);
        let full_code = {
            let mut c = BitString::new();
            c.push(false);
            c.extend(&encode_natural(n as u64));
            c
        };
        let mut models = vec![FiniteSetModel::new(
            format!("full(n={n})"),
            all.clone(),
            full_code,
        )];
        let branch = |payload: &[&BitString]| {
            let mut c = BitString::new();
            c.push(true);
            c.extend(&encode_natural(n as u64));
            for p in payload {
                c.extend(p);
            }
            c
        };
        match self {
            ModelFamily::Full => {}
            ModelFamily::Singletons => {
                for x in &all {
                    models.push(FiniteSetModel::new(
                        format!("singleton({x})"),
                        vec![x.clone()],
                        branch(&[x]),
                    ));
                }
            }
            ModelFamily::Masks => {
                for r in 1..=n {
                    let rcode = encode_natural(r as u64);
                    for p in BitString::all_of_length(r) {
                        let elements: Vec<BitString> = all
                            .iter()
                            .filter(|x| p.is_prefix_of(x))
                            .cloned()
                            .collect();
                        models.push(FiniteSetModel::new(
                            format!("mask({p})"),
                            elements,
                            branch(&[&rcode, &p]),
                        ));
                    }
                }
            }
            ModelFamily::TypeClasses => {
                for k in 0..=n {
                    let elements: Vec<BitString> = all
                        .iter()
                        .filter(|x| x.count_ones() == k)
                        .cloned()
                        .collect();
                    models.push(FiniteSetModel::new(
                        format!("typeclass(n={n},k={k})"),
                        elements,
                        branch(&[&encode_natural(k as u64)]),
                    ));
                }
            }
            ModelFamily::Parity => {
                let pat_len = n.div_ceil(2);
                for pat in BitString::all_of_length(pat_len) {
                    let elements: Vec<BitString> = all
                        .iter()
                        .filter(|x| (0..pat_len).all(|i| x.get(2 * i) == pat.get(i)))
                        .cloned()
                        .collect();
                    models.push(FiniteSetModel::new(
                        format!("parity({pat})"),
                        elements,
                        branch(&[&pat]),
                    ));
                }
            }
            ModelFamily::HammingBalls => {
                for center in &all {
                    for radius in 0..=n {
                        let elements: Vec<BitString> = all
                            .iter()
                            .filter(|x| hamming(x, center) <= radius)
                            .cloned()
                            .collect();
                        models.push(FiniteSetModel::new(
                            format!("ball({center},r={radius})"),
                            elements,
                            branch(&[center, &encode_natural(radius as u64)]),
                        ));
                    }
                }
            }
        }
        models
    }

    /// Decodes a model code back to the set it names (the invariant
    /// check that codes are self-describing).
    pub fn decode(&self, code: &BitString) -> Result<FiniteSetModel, StatError> {
        let mut r = BitReader::new(code);
        let bad = |what: &str| StatError::BadFamily(format!("model code: {what}"));
        let is_full = !r.read_bit().ok_or_else(|| bad("empty"))?;
        let n = decode_natural(&mut r).map_err(|e| bad(&e.to_string()))? as usize;
        if is_full {
            return Ok(self
                .enumerate(n)
                .into_iter()
                .next()
                .expect("full set always enumerated"));
        }
        self.enumerate(n)
            .into_iter()
            .find(|m| m.model_code() == code)
            .ok_or_else(|| bad("no such model"))
    }

    /// Largest model cost at length `n` (top of the R grid).
    pub fn max_cost(&self, n: usize) -> u64 {
        self.enumerate(n)
            .iter()
            .map(|m| m.model_cost())
            .max()
            .unwrap()
    }
}

fn hamming(a: &BitString, b: &BitString) -> usize {
    a.iter().zip(b.iter()).filter(|(x, y)| x != y).count()
}

/// `δ(x|S) = log|S| − K̂(x | listing of S)`, `+∞` when `x ∉ S`.
/// May be negative at desk scale (conditional copy overhead).
pub fn randomness_deficiency(
    x: &BitString,
    model: &FiniteSetModel,
    oracle: &ComplexityOracle,
) -> Result<f64, VmError> {
    if !model.contains(x) {
        return Ok(f64::INFINITY);
    }
    let k = conditional_khat(x, model, oracle)?;
    Ok(model.log_size() - k as f64)
}

fn conditional_khat(
    x: &BitString,
    model: &FiniteSetModel,
    oracle: &ComplexityOracle,
) -> Result<u32, VmError> {
    oracle
        .table(&model.canonical_listing())?
        .khat(x)
        .ok_or_else(|| VmError::NoProgram(x.clone()))
}

/// `x` is typical for `S` at threshold β iff `x ∈ S` and `δ(x|S) ≤ β`.
pub fn is_typical(
    x: &BitString,
    model: &FiniteSetModel,
    oracle: &ComplexityOracle,
    beta: f64,
) -> Result<bool, VmError> {
    if !model.contains(x) {
        return Ok(false);
    }
    Ok(randomness_deficiency(x, model, oracle)? <= beta)
}

/// `S` is optimal for `x` at slack `c` iff
/// `model_cost(S) + log|S| ≤ K̂(x) + c`.
pub fn is_optimal(
    x: &BitString,
    model: &FiniteSetModel,
    oracle: &ComplexityOracle,
    c: f64,
) -> Result<bool, VmError> {
    if !model.contains(x) {
        return Ok(false);
    }
    let khat = oracle.khat(x).ok_or_else(|| VmError::NoProgram(x.clone()))?;
    Ok(model.model_cost() as f64 + model.log_size() <= khat as f64 + c)
}

/// One sampled rate on a structure curve. `None` values mean the
/// minimum was over an empty candidate set (rendered `unreachable`).
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub rate: u64,
    pub h: Option<f64>,
    pub h_witness: Option<String>,
    pub lambda: Option<f64>,
    pub lambda_witness: Option<String>,
    pub beta: Option<f64>,
    pub beta_witness: Option<String>,
}

/// The three structure functions of one string against one family.
#[derive(Debug, Clone)]
pub struct StructureCurve {
    pub x: BitString,
    pub family: ModelFamily,
    pub points: Vec<CurvePoint>,
}

impl StructureCurve {
    /// CSV rows `R,h,lambda,beta,witness` (h's witness; `inf` marks
    /// unreachable rates). Deterministic formatting, 9 decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("R,h,lambda,beta,witness\n");
        let fmt = |v: &Option<f64>| match v {
            Some(v) => format!("{v:.9}"),
            None => "inf".to_string(),
        };
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.rate,
                fmt(&p.h),
                fmt(&p.lambda),
                fmt(&p.beta),
                p.h_witness.as_deref().unwrap_or("-")
            ));
        }
        out
    }
}

/// Evaluates h_x, λ_x (and β_x when `with_beta`) on the integer R grid
/// `0..=max_cost`, taking exact minima over the enumerated family.
///
/// β needs one conditional table per model containing `x`; pass
/// `with_beta = false` to skip those (h and λ only use the ε table).
pub fn structure_functions(
    x: &BitString,
    family: ModelFamily,
    oracle: &ComplexityOracle,
    with_beta: bool,
) -> Result<StructureCurve, VmError> {
    let models = family.enumerate(x.len());
    let containing: Vec<&FiniteSetModel> = models.iter().filter(|m| m.contains(x)).collect();
    // (cost, log|S|, δ, label) per candidate model
    let mut rows = Vec::with_capacity(containing.len());
    for m in &containing {
        let delta = if with_beta {
            Some(randomness_deficiency(x, m, oracle)?)
        } else {
            None
        };
        rows.push((m.model_cost(), m.log_size(), delta, m.label().to_string()));
    }
    let max_cost = family.max_cost(x.len());
    let mut points = Vec::with_capacity(max_cost as usize + 1);
    for rate in 0..=max_cost {
        let within = || rows.iter().filter(|(cost, ..)| *cost <= rate);
        let h_best = within().min_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap()
                .then_with(|| a.0.cmp(&b.0))
        });
        let lambda_best = within().min_by(|a, b| {
            (a.0 as f64 + a.1).partial_cmp(&(b.0 as f64 + b.1)).unwrap()
        });
        let beta_best = if with_beta {
            within().min_by(|a, b| a.2.partial_cmp(&b.2).unwrap())
        } else {
            None
        };
        points.push(CurvePoint {
            rate,
            h: h_best.map(|r| r.1),
            h_witness: h_best.map(|r| r.3.clone()),
            lambda: lambda_best.map(|r| r.0 as f64 + r.1),
            lambda_witness: lambda_best.map(|r| r.3.clone()),
            beta: beta_best.and_then(|r| r.2),
            beta_witness: beta_best.map(|r| r.3.clone()),
        });
    }
    Ok(StructureCurve {
        x: x.clone(),
        family,
        points,
    })
}

/// Conditions (canonical listings) an oracle needs before β_x or
/// deficiencies can be evaluated against `family` at length `n`.
pub fn listing_conditions(family: ModelFamily, n: usize, x: Option<&BitString>) -> Vec<BitString> {
    family
        .enumerate(n)
        .iter()
        .filter(|m| x.is_none_or(|x| m.contains(x)))
        .map(|m| m.canonical_listing())
        .collect()
}

/// The least-cost optimal set for `x` at slack `c`; ties broken by
/// enumeration order. Errors with the best achieved two-part length
/// when no model qualifies.
pub fn minimal_sufficient_statistic(
    x: &BitString,
    family: ModelFamily,
    oracle: &ComplexityOracle,
    c: f64,
) -> Result<FiniteSetModel, StatError> {
    let models = family.enumerate(x.len());
    let khat = oracle
        .khat(x)
        .ok_or_else(|| StatError::BadFamily(format!("{x} outside oracle budget")))? as f64;
    let mut best: Option<&FiniteSetModel> = None;
    let mut best_two_part = f64::INFINITY;
    for m in models.iter().filter(|m| m.contains(x)) {
        let two_part = m.model_cost() as f64 + m.log_size();
        best_two_part = best_two_part.min(two_part);
        if two_part <= khat + c {
            let better = match best {
                None => true,
                Some(b) => m.model_cost() < b.model_cost(),
            };
            if better {
                best = Some(m);
            }
        }
    }
    best.cloned().ok_or(StatError::NoOptimalSet {
        slack: c,
        best_two_part,
    })
}

/// Proposition 3(a): the uniform probability model of a finite set.
pub fn set_to_prob(model: &FiniteSetModel) -> Vec<(BitString, BigRational)> {
    let p = BigRational::new(BigInt::one(), BigInt::from(model.len()));
    model
        .elements()
        .iter()
        .map(|e| (e.clone(), p.clone()))
        .collect()
}

/// Proposition 3(b): from a probability model `f` containing `x`, the
/// finite-set model `S = {y : f(y) > 2^(−m−1)}` with `m = ⌊log 1/f(x)⌋`.
/// Guarantees `x ∈ S` and `|S| < 2^(m+1)`.
pub fn prob_to_set(
    f: &[(BitString, BigRational)],
    x: &BitString,
) -> Result<FiniteSetModel, StatError> {
    let fx = f
        .iter()
        .find(|(y, _)| y == x)
        .map(|(_, p)| p.clone())
        .filter(|p| p.is_positive())
        .ok_or(StatError::ZeroMass)?;
    let m = floor_log2_inv(&fx);
    let threshold = BigRational::new(BigInt::one(), BigInt::one() << (m as usize + 1));
    let elements: Vec<BitString> = f
        .iter()
        .filter(|(_, p)| *p > threshold)
        .map(|(y, _)| y.clone())
        .collect();
    debug_assert!((elements.len() as u64) < (1u64 << (m + 1)));
    // explicit listing code: |S| then each element self-delimited
    let mut code = encode_natural(elements.len() as u64);
    let mut sorted = elements.clone();
    sorted.sort();
    for e in &sorted {
        code.extend(&encode_string_self_delimiting(e));
    }
    Ok(FiniteSetModel::new(
        format!("threshold(m={m})"),
        elements,
        code,
    ))
}

/// Exact expected structure-function value `Σ f(x)·h_x(R)` under a
/// source over {0,1}^n, for each integer R. Entries where some x has
/// `h_x(R) = ∞` are `None`.
pub fn expected_h_curve(
    family: ModelFamily,
    n: usize,
    source: &[(BitString, BigRational)],
    oracle: &ComplexityOracle,
) -> Result<Vec<(u64, Option<f64>)>, VmError> {
    let mut curves = Vec::new();
    for (x, p) in source {
        if p.is_zero() {
            continue;
        }
        let curve = structure_functions(x, family, oracle, false)?;
        curves.push((curve, crate::numeric::rational_to_f64(p)));
    }
    let max_cost = family.max_cost(n);
    let mut out = Vec::new();
    for rate in 0..=max_cost {
        let mut total = 0.0;
        let mut reachable = true;
        for (curve, pf) in &curves {
            match curve.points[rate as usize].h {
                Some(h) => total += pf * h,
                None => {
                    reachable = false;
                    break;
                }
            }
        }
        out.push((rate, reachable.then_some(total)));
    }
    Ok(out)
}

/// Cost of the full-set model (base of every family's R grid).
pub fn full_set_cost(n: usize) -> u64 {
    1 + natural_code_len(n as u64)
}

/// Builds an oracle carrying every listing condition β_x needs for `x`
/// against `family`, plus the ε table.
pub fn oracle_for_deficiency(
    machine: crate::toyvm::ToyMachine,
    family: ModelFamily,
    n: usize,
    x: Option<&BitString>,
) -> Result<ComplexityOracle, VmError> {
    ComplexityOracle::build(machine, &listing_conditions(family, n, x))
}

/// Convenience: deficiency table of one model against the ε oracle plus
/// its own listing (used by the selftest battery).
pub fn deficiency_profile(
    model: &FiniteSetModel,
    oracle: &ComplexityOracle,
) -> Result<Vec<(BitString, f64)>, VmError> {
    model
        .elements()
        .iter()
        .map(|x| randomness_deficiency(x, model, oracle).map(|d| (x.clone(), d)))
        .collect()
}

/// The ε-table khat, needed by callers ranging over whole families.
pub fn khat_of(table: &ConditionTable, x: &BitString) -> Option<u32> {
    table.khat(x)
}
