//! Shannon information measures over finite joint distributions with
//! exact rational masses: entropy, conditional entropy, KL divergence,
//! mutual information, per-outcome information, and the probabilistic
//! data-processing inequality.
//!
//! Structural tests (independence, dyadicity, zero masses) are exact;
//! logarithmic values are f64 bits under the conventions
//! `0·log(1/0) = 0` and `log(1/0) = ∞`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coding::{parse_rational, Dist};
use crate::error::MeasureError;
use crate::numeric::{log2_rational, p_log2_inv, rational_to_f64};

/// Bits, as a plain f64 (may be `f64::INFINITY` for divergences).
pub type Bits = f64;

/// Shannon entropy `H(X) = Σ p log 1/p` in bits.
pub fn entropy(dist: &Dist) -> Bits {
    dist.entropy()
}

/// A joint probability mass function on `X × Y` with exact weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDist {
    x_alphabet: Vec<String>,
    y_alphabet: Vec<String>,
    /// `mass[i][j] = f(x_i, y_j)`
    mass: Vec<Vec<BigRational>>,
}

impl JointDist {
    pub fn new(
        x_alphabet: Vec<String>,
        y_alphabet: Vec<String>,
        mass: Vec<Vec<BigRational>>,
    ) -> Result<Self, MeasureError> {
        if mass.len() != x_alphabet.len()
            || mass.iter().any(|row| row.len() != y_alphabet.len())
        {
            return Err(MeasureError::BadJoint("mass matrix shape mismatch".into()));
        }
        let mut total = BigRational::zero();
        for row in &mass {
            for p in row {
                if p.is_negative() {
                    return Err(MeasureError::BadJoint("negative mass".into()));
                }
                total += p;
            }
        }
        if total != BigRational::one() {
            return Err(MeasureError::BadJoint(format!(
                "mass sums to {total}, not 1"
            )));
        }
        Ok(JointDist {
            x_alphabet,
            y_alphabet,
            mass,
        })
    }

    /// Joint from integer weights `w_ij / Σ w`.
    pub fn from_weights(x_n: usize, y_n: usize, weights: &[u64]) -> Result<Self, MeasureError> {
        assert_eq!(weights.len(), x_n * y_n);
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return Err(MeasureError::BadJoint("zero total weight".into()));
        }
        let mass = (0..x_n)
            .map(|i| {
                (0..y_n)
                    .map(|j| {
                        BigRational::new(weights[i * y_n + j].into(), total.into())
                    })
                    .collect()
            })
            .collect();
        JointDist::new(
            (0..x_n).map(|i| i.to_string()).collect(),
            (0..y_n).map(|j| j.to_string()).collect(),
            mass,
        )
    }

    /// Product of two marginals (an exactly independent joint).
    pub fn product(x: &Dist, y: &Dist) -> Self {
        let mass = x
            .probs()
            .iter()
            .map(|px| y.probs().iter().map(|py| px * py).collect())
            .collect();
        JointDist {
            x_alphabet: x.outcomes().to_vec(),
            y_alphabet: y.outcomes().to_vec(),
            mass,
        }
    }

    pub fn x_alphabet(&self) -> &[String] {
        &self.x_alphabet
    }

    pub fn y_alphabet(&self) -> &[String] {
        &self.y_alphabet
    }

    pub fn mass(&self, i: usize, j: usize) -> &BigRational {
        &self.mass[i][j]
    }

    /// Transposed joint (swaps the roles of X and Y).
    pub fn swap(&self) -> JointDist {
        let mass = (0..self.y_alphabet.len())
            .map(|j| (0..self.x_alphabet.len()).map(|i| self.mass[i][j].clone()).collect())
            .collect();
        JointDist {
            x_alphabet: self.y_alphabet.clone(),
            y_alphabet: self.x_alphabet.clone(),
            mass,
        }
    }

    /// Marginal `f_1(x) = Σ_y f(x,y)`.
    pub fn marginal_x(&self) -> Dist {
        let probs: Vec<BigRational> = self
            .mass
            .iter()
            .map(|row| row.iter().cloned().sum())
            .collect();
        Dist::new(self.x_alphabet.clone(), probs).expect("marginal of a valid joint")
    }

    /// Marginal `f_2(y) = Σ_x f(x,y)`.
    pub fn marginal_y(&self) -> Dist {
        self.swap().marginal_x()
    }

    /// Exact independence test `f(x,y) = f_1(x)·f_2(y)` for all pairs.
    pub fn is_independent(&self) -> bool {
        let fx = self.marginal_x();
        let fy = self.marginal_y();
        for (i, row) in self.mass.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if *p != &fx.probs()[i] * &fy.probs()[j] {
                    return false;
                }
            }
        }
        true
    }

    /// Parses `x<TAB>y<TAB>p/q` lines; missing pairs get mass 0.
    pub fn parse(text: &str) -> Result<Self, MeasureError> {
        let mut entries: Vec<(String, String, BigRational)> = Vec::new();
        let mut xs: Vec<String> = Vec::new();
        let mut ys: Vec<String> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.splitn(3, '\t');
            let (x, y, frac) = match (parts.next(), parts.next(), parts.next()) {
                (Some(x), Some(y), Some(f)) => (x, y, f),
                _ => {
                    return Err(MeasureError::BadJoint(format!(
                        "line {}: expected x<TAB>y<TAB>p/q",
                        lineno + 1
                    )))
                }
            };
            let p = parse_rational(frac.trim())
                .map_err(|e| MeasureError::BadJoint(format!("line {}: {e}", lineno + 1)))?;
            if !xs.iter().any(|s| s == x) {
                xs.push(x.to_string());
            }
            if !ys.iter().any(|s| s == y) {
                ys.push(y.to_string());
            }
            entries.push((x.to_string(), y.to_string(), p));
        }
        let mut mass = vec![vec![BigRational::zero(); ys.len()]; xs.len()];
        for (x, y, p) in entries {
            let i = xs.iter().position(|s| *s == x).unwrap();
            let j = ys.iter().position(|s| *s == y).unwrap();
            mass[i][j] += p;
        }
        JointDist::new(xs, ys, mass)
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, x) in self.x_alphabet.iter().enumerate() {
            for (j, y) in self.y_alphabet.iter().enumerate() {
                let p = &self.mass[i][j];
                if !p.is_zero() {
                    writeln!(s, "{x}\t{y}\t{}/{}", p.numer(), p.denom()).unwrap();
                }
            }
        }
        s
    }
}

/// Joint entropy `H(X,Y)`.
pub fn joint_entropy(j: &JointDist) -> Bits {
    j.mass
        .iter()
        .flat_map(|row| row.iter())
        .map(p_log2_inv)
        .sum()
}

/// Conditional entropy `H(Y|X) = Σ_x f_1(x) H(Y|X=x)`.
pub fn conditional_entropy(j: &JointDist) -> Bits {
    joint_entropy(j) - entropy(&j.marginal_x())
}

/// `D(f ∥ g) = Σ f log f/g`; `+∞` when `f` puts mass where `g` has none.
/// Returns exactly 0.0 when `f = g` as rationals.
pub fn kl_divergence(f: &Dist, g: &Dist) -> Result<Bits, MeasureError> {
    if f.outcomes() != g.outcomes() {
        return Err(MeasureError::AlphabetMismatch(
            "KL divergence needs a common outcome list".into(),
        ));
    }
    if f == g {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for (pf, pg) in f.probs().iter().zip(g.probs()) {
        if pf.is_zero() {
            continue;
        }
        if pg.is_zero() {
            return Ok(f64::INFINITY);
        }
        sum += rational_to_f64(pf) * log2_rational(&(pf / pg));
    }
    Ok(sum)
}

/// Mutual information `I(X;Y) = Σ f(x,y) log f(x,y)/(f1(x)f2(y))`.
/// Returns exactly 0.0 when the joint is exactly independent.
pub fn mutual_info(j: &JointDist) -> Bits {
    if j.is_independent() {
        return 0.0;
    }
    let fx = j.marginal_x();
    let fy = j.marginal_y();
    let mut sum = 0.0;
    for (i, row) in j.mass.iter().enumerate() {
        for (jj, p) in row.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let prod = &fx.probs()[i] * &fy.probs()[jj];
            sum += rational_to_f64(p) * log2_rational(&(p / prod));
        }
    }
    sum
}

/// The information in the outcome `Y=y` about `X`:
/// `I(Y=y : X) = H(X) − H(X|Y=y)`. May be negative.
pub fn individual_info(j: &JointDist, y: &str) -> Result<Bits, MeasureError> {
    let jj = j
        .y_alphabet
        .iter()
        .position(|s| s == y)
        .ok_or_else(|| MeasureError::AlphabetMismatch(format!("unknown outcome {y:?}")))?;
    let py: BigRational = j.mass.iter().map(|row| row[jj].clone()).sum();
    if py.is_zero() {
        return Err(MeasureError::ZeroProbabilityEvent(format!("Y={y}")));
    }
    // H(X|Y=y) from the renormalized column
    let h_cond: f64 = j
        .mass
        .iter()
        .map(|row| p_log2_inv(&(&row[jj] / &py)))
        .sum();
    Ok(entropy(&j.marginal_x()) - h_cond)
}

/// Result of a data-processing comparison `I(X;Y)` vs `I(X;T(Y))`.
#[derive(Debug, Clone, Copy)]
pub struct DpiCheck {
    pub lhs: Bits,
    pub rhs: Bits,
    pub holds: bool,
}

/// Applies a deterministic map `T` to the Y outcomes and merges columns.
pub fn apply_to_y(j: &JointDist, map: &BTreeMap<String, String>) -> Result<JointDist, MeasureError> {
    let mut new_ys: Vec<String> = Vec::new();
    let mut target: Vec<usize> = Vec::with_capacity(j.y_alphabet.len());
    for y in &j.y_alphabet {
        let t = map
            .get(y)
            .ok_or_else(|| MeasureError::AlphabetMismatch(format!(
                "map is not total: missing {y:?}"
            )))?;
        let idx = match new_ys.iter().position(|s| s == t) {
            Some(i) => i,
            None => {
                new_ys.push(t.clone());
                new_ys.len() - 1
            }
        };
        target.push(idx);
    }
    let mass = j
        .mass
        .iter()
        .map(|row| {
            let mut new_row = vec![BigRational::zero(); new_ys.len()];
            for (jj, p) in row.iter().enumerate() {
                new_row[target[jj]] += p;
            }
            new_row
        })
        .collect();
    JointDist::new(j.x_alphabet.clone(), new_ys, mass)
}

/// Data-processing inequality `I(X;Y) ≥ I(X;T(Y))`, checked at 1e-9 bits.
pub fn data_processing_check(
    j: &JointDist,
    map: &BTreeMap<String, String>,
) -> Result<DpiCheck, MeasureError> {
    let lhs = mutual_info(j);
    let rhs = mutual_info(&apply_to_y(j, map)?);
    Ok(DpiCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-9,
    })
}
