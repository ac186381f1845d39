//! Probabilistic sufficient statistics over exact-rational parameter
//! grids: the conditional-distribution definition, its expectation and
//! mutual-information reformulations, sequential statistics with their
//! partition laws, near-sufficiency gaps, and the bridge experiment
//! relating algorithmic to probabilistic sufficiency.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitString;
use crate::coding::{natural_code_len, Dist};
use crate::error::StatError;
use crate::measures::{mutual_info, JointDist};
use crate::numeric::{log2_rational, rational_to_f64};
use crate::toyvm::{ComplexityOracle, ConditionTable};

/// A finite model class: Bernoulli product sources over an exact
/// rational parameter grid.
#[derive(Debug, Clone)]
pub struct ParamFamily {
    thetas: Vec<BigRational>,
}

impl ParamFamily {
    pub fn bernoulli(thetas: Vec<BigRational>) -> Result<Self, StatError> {
        if thetas.len() < 2 {
            return Err(StatError::BadFamily(
                "need at least two grid parameters".into(),
            ));
        }
        let one = BigRational::one();
        if thetas.iter().any(|t| *t <= BigRational::zero() || *t >= one) {
            return Err(StatError::BadFamily("θ must lie strictly in (0,1)".into()));
        }
        Ok(ParamFamily { thetas })
    }

    /// The shipped grid θ ∈ {2/10, 3/10, …, 8/10}.
    pub fn default_bernoulli() -> Self {
        let thetas = (2..=8)
            .map(|i| BigRational::new(BigInt::from(i), BigInt::from(10)))
            .collect();
        ParamFamily { thetas }
    }

    pub fn thetas(&self) -> &[BigRational] {
        &self.thetas
    }

    /// `f_θ(x) = θ^{S(x)} (1−θ)^{n−S(x)}` with S the number of ones.
    pub fn mass(&self, theta: &BigRational, x: &BitString) -> BigRational {
        let ones = x.count_ones() as i32;
        let zeros = x.count_zeros() as i32;
        let one_minus = BigRational::one() - theta;
        pow_rational(theta, ones) * pow_rational(&one_minus, zeros)
    }
}

fn pow_rational(base: &BigRational, exp: i32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// A sequential statistic maps each string to the set of same-length
/// strings sharing its value; the distinct sets must partition {0,1}^n
/// with `x ∈ S(x)` (the sequential-statistic laws, checked by
/// [`validate_sequential`]).
pub trait SequentialStatistic {
    fn name(&self) -> String;
    /// The class `S(x)` as an explicit element list.
    fn class_of(&self, x: &BitString) -> Vec<BitString>;
    /// Description length of the class value under the statistic's
    /// prefix code, the K(S(x)) surrogate for the bridge experiment.
    fn model_cost(&self, x: &BitString) -> u64;
}

/// Count-of-ones (the Bernoulli sufficient statistic).
pub struct OnesStat;
/// Count of positions i with x_i = 1 and x_{i+1} = 1 (not sufficient).
pub struct PairsStat;
/// The identity statistic S(x) = {x}.
pub struct SingletonStat;
/// The constant statistic S(x) = {0,1}^n.
pub struct FullStat;
/// Product statistic V(x) = (A(x), B(x)); refines both partitions.
pub struct CombinedStat<A, B>(pub A, pub B);

fn ones(x: &BitString) -> u64 {
    x.count_ones() as u64
}

fn adjacent_one_pairs(x: &BitString) -> u64 {
    (1..x.len()).filter(|&i| x.get(i - 1) && x.get(i)).count() as u64
}

impl SequentialStatistic for OnesStat {
    fn name(&self) -> String {
        "ones".into()
    }

    fn class_of(&self, x: &BitString) -> Vec<BitString> {
        let k = ones(x);
        BitString::all_of_length(x.len())
            .into_iter()
            .filter(|y| ones(y) == k)
            .collect()
    }

    fn model_cost(&self, x: &BitString) -> u64 {
        1 + natural_code_len(x.len() as u64) + natural_code_len(ones(x))
    }
}

impl SequentialStatistic for PairsStat {
    fn name(&self) -> String {
        "pairs".into()
    }

    fn class_of(&self, x: &BitString) -> Vec<BitString> {
        let t = adjacent_one_pairs(x);
        BitString::all_of_length(x.len())
            .into_iter()
            .filter(|y| adjacent_one_pairs(y) == t)
            .collect()
    }

    fn model_cost(&self, x: &BitString) -> u64 {
        1 + natural_code_len(x.len() as u64) + natural_code_len(adjacent_one_pairs(x))
    }
}

impl SequentialStatistic for SingletonStat {
    fn name(&self) -> String {
        "singleton".into()
    }

    fn class_of(&self, x: &BitString) -> Vec<BitString> {
        vec![x.clone()]
    }

    fn model_cost(&self, x: &BitString) -> u64 {
        1 + natural_code_len(x.len() as u64) + x.len() as u64
    }
}

impl SequentialStatistic for FullStat {
    fn name(&self) -> String {
        "full".into()
    }

    fn class_of(&self, x: &BitString) -> Vec<BitString> {
        BitString::all_of_length(x.len())
    }

    fn model_cost(&self, x: &BitString) -> u64 {
        1 + natural_code_len(x.len() as u64)
    }
}

impl<A: SequentialStatistic, B: SequentialStatistic> SequentialStatistic for CombinedStat<A, B> {
    fn name(&self) -> String {
        format!("({},{})", self.0.name(), self.1.name())
    }

    fn class_of(&self, x: &BitString) -> Vec<BitString> {
        let b_class = self.1.class_of(x);
        self.0
            .class_of(x)
            .into_iter()
            .filter(|y| b_class.contains(y))
            .collect()
    }

    fn model_cost(&self, x: &BitString) -> u64 {
        // joint value: both payloads behind one n header
        self.0.model_cost(x) + self.1.model_cost(x) - natural_code_len(x.len() as u64) - 1
    }
}

/// Checks the sequential-statistic laws exhaustively at length `n`.
pub fn validate_sequential(stat: &dyn SequentialStatistic, n: usize) -> Result<(), StatError> {
    let all = BitString::all_of_length(n);
    let mut classes: BTreeMap<Vec<BitString>, u64> = BTreeMap::new();
    for x in &all {
        let mut class = stat.class_of(x);
        class.sort();
        if class.iter().any(|y| y.len() != n) {
            return Err(StatError::NotSequential {
                condition: "S(x) ⊆ {0,1}^n",
                detail: format!("class of {x} leaves length {n}"),
            });
        }
        if !class.contains(x) {
            return Err(StatError::NotSequential {
                condition: "x ∈ S(x)",
                detail: format!("{x} missing from its own class"),
            });
        }
        *classes.entry(class).or_insert(0) += 1;
    }
    let covered: usize = classes.keys().map(|c| c.len()).sum();
    if covered != all.len() {
        return Err(StatError::NotSequential {
            condition: "values partition {0,1}^n",
            detail: format!("classes cover {covered} of {} strings", all.len()),
        });
    }
    for (class, hits) in &classes {
        if *hits as usize != class.len() {
            return Err(StatError::NotSequential {
                condition: "values partition {0,1}^n",
                detail: "class hit count does not match its size".into(),
            });
        }
    }
    Ok(())
}

/// Failure evidence: two parameters whose conditionals differ at (s, x).
#[derive(Debug, Clone)]
pub struct SufficiencyWitness {
    pub theta1: BigRational,
    pub theta2: BigRational,
    pub class: Vec<BitString>,
    pub x: BitString,
}

#[derive(Debug, Clone)]
pub struct SufficiencyCheck {
    pub sufficient: bool,
    pub witness: Option<SufficiencyWitness>,
}

fn classes_at(stat: &dyn SequentialStatistic, n: usize) -> Vec<Vec<BitString>> {
    let mut seen = BTreeMap::new();
    for x in BitString::all_of_length(n) {
        let mut class = stat.class_of(&x);
        class.sort();
        seen.insert(class, ());
    }
    seen.into_keys().collect()
}

/// Exact sufficiency: `f_θ(x|s)` must be identical across the grid for
/// every class `s` and member `x` (rational comparison, no tolerance).
pub fn check_sufficiency_exact(
    family: &ParamFamily,
    stat: &dyn SequentialStatistic,
    n: usize,
) -> Result<SufficiencyCheck, StatError> {
    validate_sequential(stat, n)?;
    for class in classes_at(stat, n) {
        let class_mass: Vec<BigRational> = family
            .thetas()
            .iter()
            .map(|t| class.iter().map(|y| family.mass(t, y)).sum())
            .collect();
        for x in &class {
            let reference = family.mass(&family.thetas()[0], x) / &class_mass[0];
            for (i, theta) in family.thetas().iter().enumerate().skip(1) {
                let cond = family.mass(theta, x) / &class_mass[i];
                if cond != reference {
                    return Ok(SufficiencyCheck {
                        sufficient: false,
                        witness: Some(SufficiencyWitness {
                            theta1: family.thetas()[0].clone(),
                            theta2: theta.clone(),
                            class: class.clone(),
                            x: x.clone(),
                        }),
                    });
                }
            }
        }
    }
    Ok(SufficiencyCheck {
        sufficient: true,
        witness: None,
    })
}

/// Expectation form: per-θ gap
/// `Σ_x f_θ(x)[log 1/f_θ(x|S(x)) − log 1/g(x|S(x))]` with `g` the
/// grid-pooled conditional (uniform mixture of the per-θ conditionals).
/// All gaps vanish iff the exact check passes.
pub fn check_sufficiency_expectation(
    family: &ParamFamily,
    stat: &dyn SequentialStatistic,
    n: usize,
) -> Result<Vec<(BigRational, f64)>, StatError> {
    validate_sequential(stat, n)?;
    let grid_len = BigRational::from_integer(BigInt::from(family.thetas().len()));
    let mut gaps = Vec::new();
    for theta in family.thetas() {
        let mut gap = 0.0f64;
        for class in classes_at(stat, n) {
            let mass_per_theta: Vec<BigRational> = family
                .thetas()
                .iter()
                .map(|t| class.iter().map(|y| family.mass(t, y)).sum())
                .collect();
            let theta_mass: BigRational = class.iter().map(|y| family.mass(theta, y)).sum();
            for x in &class {
                let f_cond = family.mass(theta, x) / &theta_mass;
                // pooled conditional: average of per-θ conditionals
                let pooled: BigRational = family
                    .thetas()
                    .iter()
                    .zip(&mass_per_theta)
                    .map(|(t, m)| family.mass(t, x) / m)
                    .sum::<BigRational>()
                    / &grid_len;
                if f_cond == pooled {
                    continue; // exactly equal terms contribute nothing
                }
                let weight = rational_to_f64(&family.mass(theta, x));
                gap += weight * (log2_rational(&pooled) - log2_rational(&f_cond));
            }
        }
        gaps.push((theta.clone(), gap));
    }
    Ok(gaps)
}

/// MI form across a prior set: for each prior over the grid, the pair
/// `(I(Θ;X), I(Θ;S(X)))`. Equal for sufficient statistics; strictly
/// dropping for insufficient ones at some prior.
pub fn sufficiency_via_mi(
    family: &ParamFamily,
    stat: &dyn SequentialStatistic,
    n: usize,
    priors: &[Dist],
) -> Result<Vec<(String, f64, f64)>, StatError> {
    validate_sequential(stat, n)?;
    let all = BitString::all_of_length(n);
    let mut out = Vec::new();
    for prior in priors {
        if prior.len() != family.thetas().len() {
            return Err(StatError::BadFamily(
                "prior length does not match the grid".into(),
            ));
        }
        // joint over (Θ, X)
        let mass_x: Vec<Vec<BigRational>> = family
            .thetas()
            .iter()
            .zip(prior.probs())
            .map(|(t, p)| all.iter().map(|x| p * family.mass(t, x)).collect())
            .collect();
        let jx = JointDist::new(
            prior.outcomes().to_vec(),
            all.iter().map(|x| x.to_string()).collect(),
            mass_x,
        )
        .map_err(|e| StatError::BadFamily(e.to_string()))?;
        // joint over (Θ, S(X)): classes keyed by first element
        let classes = classes_at(stat, n);
        let mass_s: Vec<Vec<BigRational>> = family
            .thetas()
            .iter()
            .zip(prior.probs())
            .map(|(t, p)| {
                classes
                    .iter()
                    .map(|c| p * c.iter().map(|y| family.mass(t, y)).sum::<BigRational>())
                    .collect()
            })
            .collect();
        let js = JointDist::new(
            prior.outcomes().to_vec(),
            classes.iter().map(|c| format!("s:{}", c[0])).collect(),
            mass_s,
        )
        .map_err(|e| StatError::BadFamily(e.to_string()))?;
        out.push((
            prior_label(prior),
            mutual_info(&jx),
            mutual_info(&js),
        ));
    }
    Ok(out)
}

fn prior_label(prior: &Dist) -> String {
    prior
        .probs()
        .iter()
        .map(|p| format!("{}/{}", p.numer(), p.denom()))
        .collect::<Vec<_>>()
        .join(",")
}

/// The documented prior set: uniform plus every adjacent-pair prior.
pub fn standard_priors(grid_len: usize) -> Vec<Dist> {
    let mut priors = vec![Dist::uniform(grid_len)];
    for i in 0..grid_len - 1 {
        let mut weights = vec![0u64; grid_len];
        weights[i] = 1;
        weights[i + 1] = 1;
        priors.push(Dist::from_weights(&weights).unwrap());
    }
    priors
}

/// Near-sufficiency gaps (g fixed to uniform on the class): per (θ, n),
/// `Σ_x f_θ(x)[log 1/f_θ(x|S(x)) − log |S(x)| ]` in absolute value.
/// Exactly 0.0 when every conditional is exactly uniform.
pub fn near_sufficiency_gap(
    family: &ParamFamily,
    stat: &dyn SequentialStatistic,
    n_range: impl IntoIterator<Item = usize>,
) -> Result<Vec<(BigRational, usize, f64)>, StatError> {
    let mut out = Vec::new();
    for n in n_range {
        validate_sequential(stat, n)?;
        let classes = classes_at(stat, n);
        for theta in family.thetas() {
            let mut gap = 0.0f64;
            for class in &classes {
                let class_mass: BigRational =
                    class.iter().map(|y| family.mass(theta, y)).sum();
                let uniform = BigRational::new(BigInt::one(), BigInt::from(class.len()));
                for x in class {
                    let f_cond = family.mass(theta, x) / &class_mass;
                    if f_cond == uniform {
                        continue;
                    }
                    let weight = rational_to_f64(&family.mass(theta, x));
                    gap += weight * (log2_rational(&uniform) - log2_rational(&f_cond));
                }
            }
            out.push((theta.clone(), n, gap.abs()));
        }
    }
    Ok(out)
}

/// Per-n outcome of the algorithmic→probabilistic bridge experiment.
#[derive(Debug, Clone)]
pub struct WiskeRow {
    pub n: usize,
    /// `max_x [model_cost(S(x)) + log|S(x)| − K̂(x)]` (algorithmic slack).
    pub alg_slack: f64,
    /// per θ: (expectation gap of the class-size code, measured
    /// Shannon-Fano constant `Σ f K̂ − H`).
    pub per_theta: Vec<(BigRational, f64, f64)>,
}

/// Runs the bridge experiment: for each n, the algorithmic-sufficiency
/// slack of the statistic and the probabilistic expectation gap, which
/// the theory bounds by `alg_slack + c_θ`.
pub fn wiske_experiment(
    stat: &dyn SequentialStatistic,
    family: &ParamFamily,
    table: &ConditionTable,
    n_range: impl IntoIterator<Item = usize>,
) -> Result<Vec<WiskeRow>, StatError> {
    let mut rows = Vec::new();
    for n in n_range {
        validate_sequential(stat, n)?;
        let all = BitString::all_of_length(n);
        let khat = |x: &BitString| -> Result<f64, StatError> {
            table
                .khat(x)
                .map(|k| k as f64)
                .ok_or_else(|| StatError::BadFamily(format!("{x} outside oracle budget")))
        };
        let mut alg_slack = f64::NEG_INFINITY;
        for x in &all {
            let class = stat.class_of(x);
            let log_size = crate::numeric::log2_biguint(&num_bigint::BigUint::from(class.len()));
            alg_slack = alg_slack.max(stat.model_cost(x) as f64 + log_size - khat(x)?);
        }
        let mut per_theta = Vec::new();
        for theta in family.thetas() {
            let mut exp_log_size = 0.0;
            let mut exp_cond = 0.0;
            let mut exp_khat = 0.0;
            let mut entropy = 0.0;
            for x in &all {
                let fx = family.mass(theta, x);
                let weight = rational_to_f64(&fx);
                let class = stat.class_of(x);
                let class_mass: BigRational =
                    class.iter().map(|y| family.mass(theta, y)).sum();
                exp_log_size += weight
                    * crate::numeric::log2_biguint(&num_bigint::BigUint::from(class.len()));
                exp_cond += weight * -log2_rational(&(&fx / &class_mass));
                exp_khat += weight * khat(x)?;
                entropy += weight * -log2_rational(&fx);
            }
            let expectation_gap = exp_log_size - exp_cond;
            let c_theta = exp_khat - entropy;
            per_theta.push((theta.clone(), expectation_gap, c_theta));
        }
        rows.push(WiskeRow {
            n,
            alg_slack,
            per_theta,
        });
    }
    Ok(rows)
}

/// Oracle helper: the bridge experiment needs K̂ for all of {0,1}^n.
pub fn wiske_oracle(
    machine: crate::toyvm::ToyMachine,
) -> Result<ComplexityOracle, crate::error::VmError> {
    ComplexityOracle::build(machine, &[])
}
