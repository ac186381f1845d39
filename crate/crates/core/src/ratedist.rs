//! Rate-distortion engine: exact brute-force distortion-rate values on
//! tiny instances, Blahut-Arimoto evaluation of the information
//! rate-distortion function, the binary Shannon-Fano-distortion closed
//! form with its α-channel cross-check, distortion spheres, and the
//! expected-structure-function sandwich experiment.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bits::BitString;
use crate::coding::{parse_rational, Dist};
use crate::error::RdError;
use crate::numeric::rational_to_f64;

/// Guard on the number of codebooks the brute-force search may visit.
pub const CODEBOOK_GUARD: u128 = 10_000_000;

/// A source, a codeword alphabet, and an exact distortion table
/// (`None` entries mean `∞`).
#[derive(Debug, Clone)]
pub struct RDInstance {
    source: Dist,
    codewords: Vec<String>,
    distortion: Vec<Vec<Option<BigRational>>>,
}

impl RDInstance {
    pub fn new(
        source: Dist,
        codewords: Vec<String>,
        distortion: Vec<Vec<Option<BigRational>>>,
    ) -> Result<Self, RdError> {
        if codewords.is_empty() {
            return Err(RdError::BadInstance("no codewords".into()));
        }
        if distortion.len() != source.len()
            || distortion.iter().any(|row| row.len() != codewords.len())
        {
            return Err(RdError::BadInstance(
                "distortion table shape mismatch".into(),
            ));
        }
        for row in &distortion {
            if row.iter().flatten().any(|d| d.is_negative()) {
                return Err(RdError::BadInstance("negative distortion".into()));
            }
            if row.iter().all(|d| d.is_none()) {
                return Err(RdError::BadInstance(
                    "a source symbol has no finite distortion".into(),
                ));
            }
        }
        Ok(RDInstance {
            source,
            codewords,
            distortion,
        })
    }

    pub fn source(&self) -> &Dist {
        &self.source
    }

    pub fn codewords(&self) -> &[String] {
        &self.codewords
    }

    pub fn distortion(&self, x: usize, y: usize) -> Option<&BigRational> {
        self.distortion[x][y].as_ref()
    }

    /// Binary source `P(X=1) = p` with Hamming distortion.
    pub fn binary_hamming(p: BigRational) -> Result<Self, RdError> {
        let source = Dist::new(
            vec!["0".into(), "1".into()],
            vec![BigRational::one() - &p, p],
        )
        .map_err(|e| RdError::BadInstance(e.to_string()))?;
        let zero = BigRational::zero();
        let one = BigRational::one();
        RDInstance::new(
            source,
            vec!["0".into(), "1".into()],
            vec![
                vec![Some(zero.clone()), Some(one.clone())],
                vec![Some(one), Some(zero)],
            ],
        )
    }

    /// The uniform-source set-distortion instance: sources are the
    /// strings of length `n`, codewords the prefix-mask sets (all mask
    /// lengths 0..=n), distortion `log|S|` inside the set and `∞`
    /// outside. Its distortion-rate value at integer rate R is `n − R`.
    pub fn uniform_set_distortion(n: usize) -> Result<Self, RdError> {
        let xs = BitString::all_of_length(n);
        let source = Dist::new(
            xs.iter().map(|x| x.to_string()).collect(),
            vec![BigRational::new(BigInt::one(), BigInt::from(1u64 << n)); 1 << n],
        )
        .map_err(|e| RdError::BadInstance(e.to_string()))?;
        let mut codewords = Vec::new();
        let mut masks: Vec<BitString> = Vec::new();
        for r in 0..=n {
            for p in BitString::all_of_length(r) {
                codewords.push(format!("mask({p})"));
                masks.push(p);
            }
        }
        let distortion = xs
            .iter()
            .map(|x| {
                masks
                    .iter()
                    .map(|p| {
                        p.is_prefix_of(x).then(|| {
                            BigRational::from_integer(BigInt::from((n - p.len()) as u64))
                        })
                    })
                    .collect()
            })
            .collect();
        RDInstance::new(source, codewords, distortion)
    }

    /// Parses the instance file format: `x` alphabet line, `y` alphabet
    /// line, source-probability line, then one distortion row per `x`
    /// with `p/q` or `inf` tokens (all whitespace-separated).
    pub fn parse(text: &str) -> Result<Self, RdError> {
        let bad = |m: String| RdError::BadInstance(m);
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let xs: Vec<String> = lines
            .next()
            .ok_or_else(|| bad("missing x-alphabet line".into()))?
            .split_whitespace()
            .map(String::from)
            .collect();
        let ys: Vec<String> = lines
            .next()
            .ok_or_else(|| bad("missing y-alphabet line".into()))?
            .split_whitespace()
            .map(String::from)
            .collect();
        let probs: Vec<BigRational> = lines
            .next()
            .ok_or_else(|| bad("missing source line".into()))?
            .split_whitespace()
            .map(|t| parse_rational(t).map_err(|e| bad(e.to_string())))
            .collect::<Result<_, _>>()?;
        let source =
            Dist::new(xs.clone(), probs).map_err(|e| bad(format!("source: {e}")))?;
        let mut distortion = Vec::with_capacity(xs.len());
        for x in &xs {
            let row = lines
                .next()
                .ok_or_else(|| bad(format!("missing distortion row for {x}")))?;
            let parsed: Vec<Option<BigRational>> = row
                .split_whitespace()
                .map(|t| {
                    if t == "inf" {
                        Ok(None)
                    } else {
                        parse_rational(t).map(Some).map_err(|e| bad(e.to_string()))
                    }
                })
                .collect::<Result<_, _>>()?;
            distortion.push(parsed);
        }
        RDInstance::new(source, ys, distortion)
    }
}

/// `⌊2^(m·R)⌋` for rational `R ≥ 0`, exact via integer root.
pub fn floor_pow2(m_times_r: &BigRational) -> u128 {
    assert!(!m_times_r.is_negative());
    let num = m_times_r.numer().to_u64().expect("rate numerator range");
    let den = m_times_r.denom().to_u64().expect("rate denominator range");
    // k = ⌊2^(num/den)⌋ ⟺ k^den ≤ 2^num < (k+1)^den
    let two_pow: BigUint = BigUint::one() << num;
    let mut k = BigUint::one() << (num / den);
    while k.pow(den as u32) > two_pow {
        k -= 1u32;
    }
    while (&k + 1u32).pow(den as u32) <= two_pow {
        k += 1u32;
    }
    k.to_u128().expect("codebook size range")
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Result of the exact brute-force search.
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    /// Exact minimum expected block distortion.
    pub distortion: BigRational,
    /// Codeword tuples of the best codebook (labels joined by `·`).
    pub codebook: Vec<String>,
    pub codebooks_searched: u128,
}

/// Exact `D*_m(R)`: minimum over codebooks `C ⊆ Y^m`, `|C| ≤ ⌊2^(mR)⌋`
/// of the expected block distortion, each source tuple mapped to its
/// distortion-minimizing codeword (ties to the least index).
pub fn brute_force_d(
    instance: &RDInstance,
    m: usize,
    rate: &BigRational,
) -> Result<BruteForceResult, RdError> {
    assert!(m >= 1);
    let n_codewords = instance.codewords.len();
    let y_count = (n_codewords as u128).pow(m as u32);
    let size = floor_pow2(&(rate * BigRational::from_integer(BigInt::from(m))))
        .min(y_count);
    if size == 0 {
        return Err(RdError::BadInstance("rate budget allows no codewords".into()));
    }
    let combos = binomial_u128(y_count, size);
    if combos > CODEBOOK_GUARD {
        return Err(RdError::BudgetGuard {
            count: combos,
            guard: CODEBOOK_GUARD,
        });
    }

    // scale all distortions to a common integer denominator
    let mut den_lcm = BigInt::one();
    for row in &instance.distortion {
        for d in row.iter().flatten() {
            den_lcm = num_integer::lcm(den_lcm.clone(), d.denom().clone());
        }
    }
    let scale = |d: &BigRational| -> u128 {
        ((d * &den_lcm).numer()).to_u128().expect("distortion range")
    };
    const INF: u128 = u128::MAX;

    // per-symbol scaled distortion matrix
    let base: Vec<Vec<u128>> = instance
        .distortion
        .iter()
        .map(|row| row.iter().map(|d| d.as_ref().map_or(INF, scale)).collect())
        .collect();

    // block tables: tuples in lexicographic order
    let x_tuples = tuples(instance.source.len(), m);
    let y_tuples = tuples(n_codewords, m);
    // source-tuple mass numerators over denominator source_den^m;
    // desk-scale instances fit comfortably in u128
    let source_den: BigInt = instance
        .source
        .probs()
        .iter()
        .fold(BigInt::one(), |acc, p| num_integer::lcm(acc, p.denom().clone()));
    let mass_num: Vec<u128> = x_tuples
        .iter()
        .map(|xt| {
            xt.iter()
                .try_fold(1u128, |acc, &xi| {
                    let num = (&instance.source.probs()[xi] * &source_den)
                        .numer()
                        .to_u128()?;
                    acc.checked_mul(num)
                })
                .ok_or_else(|| RdError::BadInstance("source masses out of range".into()))
        })
        .collect::<Result<_, _>>()?;
    // block distortion (sum over coordinates, scaled; averaging by m
    // deferred to the final rational)
    let block_d: Vec<Vec<u128>> = x_tuples
        .iter()
        .map(|xt| {
            y_tuples
                .iter()
                .map(|yt| {
                    let mut total: u128 = 0;
                    for (xi, yi) in xt.iter().zip(yt) {
                        let d = base[*xi][*yi];
                        if d == INF {
                            return INF;
                        }
                        total += d;
                    }
                    total
                })
                .collect()
        })
        .collect();

    let mut best: Option<(u128, Vec<usize>)> = None;
    let mut searched: u128 = 0;
    let mut combo: Vec<usize> = (0..size as usize).collect();
    loop {
        searched += 1;
        // expected distortion of this codebook (scaled numerator)
        let mut total: u128 = 0;
        let mut feasible = true;
        for (xi, row) in block_d.iter().enumerate() {
            let mut min_d = INF;
            for &yi in &combo {
                if row[yi] < min_d {
                    min_d = row[yi];
                }
            }
            if min_d == INF {
                feasible = false;
                break;
            }
            total = total
                .checked_add(
                    mass_num[xi]
                        .checked_mul(min_d)
                        .ok_or_else(|| RdError::BadInstance("distortion overflow".into()))?,
                )
                .ok_or_else(|| RdError::BadInstance("distortion overflow".into()))?;
        }
        if feasible {
            let better = match &best {
                None => true,
                Some((b, _)) => total < *b,
            };
            if better {
                best = Some((total, combo.clone()));
            }
        }
        if !next_combination(&mut combo, y_tuples.len()) {
            break;
        }
    }
    debug_assert_eq!(searched, combos);
    let (num, combo) = best.ok_or_else(|| {
        RdError::BadInstance("no feasible codebook at this rate".into())
    })?;
    let source_den_m = (0..m).fold(BigInt::one(), |acc, _| acc * &source_den);
    let distortion = BigRational::new(
        BigInt::from(num),
        source_den_m * &den_lcm * BigInt::from(m as u64),
    );
    let codebook = combo
        .iter()
        .map(|&yi| {
            y_tuples[yi]
                .iter()
                .map(|&c| instance.codewords[c].clone())
                .collect::<Vec<_>>()
                .join("·")
        })
        .collect();
    Ok(BruteForceResult {
        distortion,
        codebook,
        codebooks_searched: searched,
    })
}

fn tuples(alphabet: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..alphabet).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A point on a rate-distortion curve, in bits per outcome.
#[derive(Debug, Clone, Copy)]
pub struct RDCurvePoint {
    pub rate: f64,
    pub distortion: f64,
    pub iterations: usize,
    pub objective_monotone: bool,
}

/// Query for [`blahut_arimoto`].
#[derive(Debug, Clone, Copy)]
pub enum BAQuery {
    /// Evaluate `R^(I)(D)` at this expected-distortion constraint.
    Distortion(f64),
    /// Run at a fixed Lagrange slope β ≥ 0.
    Slope(f64),
}

/// Blahut-Arimoto evaluation of the information rate-distortion
/// function. Alternates the channel and output-marginal updates from
/// the uniform output marginal; the free energy
/// `−Σ f(x) log Σ q(y) 2^(−β d)` decreases every iteration.
pub fn blahut_arimoto(
    instance: &RDInstance,
    query: BAQuery,
    tol: f64,
    max_iter: usize,
) -> Result<RDCurvePoint, RdError> {
    assert!(tol > 0.0);
    let f: Vec<f64> = instance.source.probs().iter().map(rational_to_f64).collect();
    let d: Vec<Vec<f64>> = instance
        .distortion
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.as_ref().map_or(f64::INFINITY, rational_to_f64))
                .collect()
        })
        .collect();
    let n_y = instance.codewords.len();

    match query {
        BAQuery::Slope(beta) => ba_at_slope(&f, &d, n_y, beta, tol, max_iter),
        BAQuery::Distortion(target) => {
            // corners first
            let d_max = (0..n_y)
                .map(|y| (0..f.len()).map(|x| f[x] * d[x][y]).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            if target >= d_max {
                return Ok(RDCurvePoint {
                    rate: 0.0,
                    distortion: d_max,
                    iterations: 0,
                    objective_monotone: true,
                });
            }
            if target <= 0.0 {
                return zero_distortion_rate(&f, &d, n_y);
            }
            // β search: distortion decreases as β grows
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            let mut hi_point = ba_at_slope(&f, &d, n_y, hi, tol, max_iter)?;
            let mut monotone = hi_point.objective_monotone;
            let mut guard = 0;
            while hi_point.distortion > target {
                hi *= 2.0;
                guard += 1;
                if guard > 60 {
                    return Err(RdError::NoConvergence {
                        iters: max_iter,
                        rate: hi_point.rate,
                        distortion: hi_point.distortion,
                    });
                }
                hi_point = ba_at_slope(&f, &d, n_y, hi, tol, max_iter)?;
                monotone &= hi_point.objective_monotone;
            }
            let mut point = hi_point;
            for _ in 0..200 {
                if (point.distortion - target).abs() <= tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let p = ba_at_slope(&f, &d, n_y, mid, tol, max_iter)?;
                monotone &= p.objective_monotone;
                if p.distortion > target {
                    lo = mid;
                } else {
                    hi = mid;
                    point = p;
                }
            }
            Ok(RDCurvePoint {
                objective_monotone: monotone,
                ..point
            })
        }
    }
}

fn zero_distortion_rate(f: &[f64], d: &[Vec<f64>], n_y: usize) -> Result<RDCurvePoint, RdError> {
    // deterministic channel onto the least-index zero-distortion codeword
    let mut q = vec![0.0f64; n_y];
    for (x, fx) in f.iter().enumerate() {
        let y = (0..n_y).find(|&y| d[x][y] == 0.0).ok_or_else(|| {
            RdError::BadInstance("distortion 0 unreachable for some symbol".into())
        })?;
        q[y] += fx;
    }
    let rate = -q.iter().filter(|&&p| p > 0.0).map(|p| p * p.log2()).sum::<f64>();
    Ok(RDCurvePoint {
        rate,
        distortion: 0.0,
        iterations: 0,
        objective_monotone: true,
    })
}

fn ba_at_slope(
    f: &[f64],
    d: &[Vec<f64>],
    n_y: usize,
    beta: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RDCurvePoint, RdError> {
    let n_x = f.len();
    // uniform output marginal initialization
    let mut q = vec![1.0 / n_y as f64; n_y];
    let weight = |x: usize, y: usize, beta: f64| -> f64 {
        if d[x][y].is_finite() {
            2f64.powf(-beta * d[x][y])
        } else {
            0.0
        }
    };
    let objective = |q: &[f64]| -> f64 {
        let mut total = 0.0;
        for (x, fx) in f.iter().enumerate() {
            let z: f64 = (0..n_y).map(|y| q[y] * weight(x, y, beta)).sum();
            total -= fx * z.log2();
        }
        total
    };
    let mut channel = vec![vec![0.0f64; n_y]; n_x];
    let mut prev_obj = objective(&q);
    let mut monotone = true;
    let mut iters = 0;
    loop {
        iters += 1;
        if iters > max_iter {
            let (rate, distortion) = rate_distortion_of(&channel, f, d, &q);
            return Err(RdError::NoConvergence {
                iters: max_iter,
                rate,
                distortion,
            });
        }
        // channel update
        for (x, row) in channel.iter_mut().enumerate() {
            let z: f64 = (0..n_y).map(|y| q[y] * weight(x, y, beta)).sum();
            for (y, g) in row.iter_mut().enumerate() {
                *g = q[y] * weight(x, y, beta) / z;
            }
            let row_sum: f64 = row.iter().sum();
            debug_assert!((row_sum - 1.0).abs() < 1e-12);
        }
        // marginal update
        for (y, qy) in q.iter_mut().enumerate() {
            *qy = (0..n_x).map(|x| f[x] * channel[x][y]).sum();
        }
        let obj = objective(&q);
        if obj > prev_obj + 1e-12 {
            monotone = false;
        }
        if (prev_obj - obj).abs() < tol {
            break;
        }
        prev_obj = obj;
    }
    let (rate, distortion) = rate_distortion_of(&channel, f, d, &q);
    Ok(RDCurvePoint {
        rate,
        distortion,
        iterations: iters,
        objective_monotone: monotone,
    })
}

fn rate_distortion_of(
    channel: &[Vec<f64>],
    f: &[f64],
    d: &[Vec<f64>],
    q: &[f64],
) -> (f64, f64) {
    let mut rate = 0.0;
    let mut distortion = 0.0;
    for (x, fx) in f.iter().enumerate() {
        for (y, qy) in q.iter().enumerate() {
            let g = channel[x][y];
            if g > 0.0 && *qy > 0.0 {
                rate += fx * g * (g / qy).log2();
                distortion += fx * g * d[x][y];
            }
        }
    }
    (rate.max(0.0), distortion)
}

/// Closed-form binary Shannon-Fano-distortion point (distortion is the
/// conditional Shannon-Fano code length): `D*(R) = H(p) − R`, clipped
/// at zero.
pub fn shannon_fano_rd_binary_d_of_r(p: &BigRational, rate: f64) -> f64 {
    let h = binary_entropy(rational_to_f64(p));
    (h - rate).max(0.0)
}

/// Inverse form `R*(D) = H(p) − D`, clipped at zero.
pub fn shannon_fano_rd_binary_r_of_d(p: &BigRational, distortion: f64) -> f64 {
    let h = binary_entropy(rational_to_f64(p));
    (h - distortion).max(0.0)
}

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// α-channel oracle for the binary Shannon-Fano-distortion example:
/// `Y_α(x) = x` w.p. α, flipped w.p. 1−α. Searches α ∈ [0, 1/2] for
/// `I(X;Y_α) = R` (refined bisection over the grid) and returns the
/// distortion `H(X|Y_α)`.
pub fn alpha_channel_d_of_r(p: &BigRational, rate: f64) -> f64 {
    let pf = rational_to_f64(p);
    let h = binary_entropy(pf);
    if rate >= h {
        return 0.0;
    }
    // I(α) decreases from H(X) at α=0 to 0 at α=1/2
    let mutual = |alpha: f64| -> f64 { h - cond_entropy_alpha(pf, alpha) };
    let mut lo = 0.0f64;
    let mut hi = 0.5f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mutual(mid) > rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    cond_entropy_alpha(pf, 0.5 * (lo + hi))
}

fn cond_entropy_alpha(p: f64, alpha: f64) -> f64 {
    // joint over (x, y): y = x w.p. α
    let j = [
        [(1.0 - p) * alpha, (1.0 - p) * (1.0 - alpha)],
        [p * (1.0 - alpha), p * alpha],
    ];
    let qy = [j[0][0] + j[1][0], j[0][1] + j[1][1]];
    let mut h = 0.0;
    for row in &j {
        for (y, &jxy) in row.iter().enumerate() {
            if jxy > 0.0 && qy[y] > 0.0 {
                h -= jxy * (jxy / qy[y]).log2();
            }
        }
    }
    h
}

/// A distortion sphere `B_y(r) = {x : d(x,y) = r}` of one codeword.
#[derive(Debug, Clone)]
pub struct DistortionSphere {
    pub center: usize,
    pub radius: BigRational,
    pub elements: Vec<usize>,
}

/// All nonempty spheres of the instance, grouped exactly by radius.
pub fn distortion_spheres(instance: &RDInstance) -> Vec<DistortionSphere> {
    let mut spheres = Vec::new();
    for y in 0..instance.codewords.len() {
        let mut by_radius: Vec<(BigRational, Vec<usize>)> = Vec::new();
        for x in 0..instance.source.len() {
            if let Some(d) = instance.distortion(x, y) {
                match by_radius.iter_mut().find(|(r, _)| r == d) {
                    Some((_, v)) => v.push(x),
                    None => by_radius.push((d.clone(), vec![x])),
                }
            }
        }
        by_radius.sort_by(|a, b| a.0.cmp(&b.0));
        for (radius, elements) in by_radius {
            spheres.push(DistortionSphere {
                center: y,
                radius,
                elements,
            });
        }
    }
    spheres
}

/// The canonical disjoint covering: every source symbol is assigned to
/// the sphere of smallest radius containing it (ties to the least
/// center index). Returns the assignment `x → sphere index`.
pub fn canonical_sphere_partition(
    instance: &RDInstance,
    spheres: &[DistortionSphere],
) -> Vec<usize> {
    (0..instance.source.len())
        .map(|x| {
            spheres
                .iter()
                .enumerate()
                .filter(|(_, s)| s.elements.contains(&x))
                .min_by(|(i, a), (j, b)| a.radius.cmp(&b.radius).then(i.cmp(j)))
                .map(|(i, _)| i)
                .expect("every symbol has a finite-distortion codeword")
        })
        .collect()
}

/// One rate row of the expected-structure-function experiment.
#[derive(Debug, Clone)]
pub struct ExpStructRow {
    pub rate: u64,
    /// `E (1/m) h_x̄(mR)` (None when some string is unreachable).
    pub expected_h: Option<f64>,
    /// Exact `D*_m(R)` over the same model class.
    pub brute_distortion: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExpStructReport {
    pub rows: Vec<ExpStructRow>,
    /// Least integer shift with `E (1/m) h_x̄(mR + shift) ≤ D*_m(R)` on
    /// every evaluated row (the measured left-inequality overhead).
    pub measured_shift: Option<u64>,
}

/// Runs the sandwich experiment on the product-mask model class: block
/// models are m-fold products of per-symbol prefix masks, model cost is
/// the sum of component costs, and the same class serves as the
/// brute-force codeword alphabet.
pub fn expected_structfn_experiment(
    n: usize,
    m: usize,
    source: &Dist,
    r_grid: &[u64],
) -> Result<ExpStructReport, RdError> {
    assert!(source.len() == 1 << n, "source must cover {{0,1}}^n");
    // per-symbol masks with their costs
    let mut masks: Vec<(BitString, u64)> = vec![(
        BitString::new(),
        crate::algstats::full_set_cost(n),
    )];
    for r in 1..=n {
        for p in BitString::all_of_length(r) {
            let cost = 1
                + crate::coding::natural_code_len(n as u64)
                + crate::coding::natural_code_len(r as u64)
                + r as u64;
            masks.push((p, cost));
        }
    }
    // block models: m-fold products
    let mut block_models: Vec<(Vec<usize>, u64, u64)> = Vec::new(); // (mask ids, cost, log|S|·… per block sum of n−r)
    for ids in tuples(masks.len(), m) {
        let cost: u64 = ids.iter().map(|&i| masks[i].1).sum();
        let log_size: u64 = ids.iter().map(|&i| (n - masks[i].0.len()) as u64).sum();
        block_models.push((ids, cost, log_size));
    }

    let xs = BitString::all_of_length(n);
    let block_xs = tuples(1 << n, m);
    let contains = |model: &[usize], xt: &[usize]| -> bool {
        model
            .iter()
            .zip(xt)
            .all(|(&mi, &xi)| masks[mi].0.is_prefix_of(&xs[xi]))
    };

    // block source mass (product), as f64 weights for the expectation
    let mass: Vec<f64> = block_xs
        .iter()
        .map(|xt| {
            xt.iter()
                .map(|&xi| rational_to_f64(&source.probs()[xi]))
                .product()
        })
        .collect();

    // h_x̄(c) for all block strings at every cost on the grid 0..=max
    let max_cost: u64 = block_models.iter().map(|b| b.1).max().unwrap();
    let h_at = |xt: &[usize], budget: u64| -> Option<u64> {
        block_models
            .iter()
            .filter(|(ids, cost, _)| *cost <= budget && contains(ids, xt))
            .map(|(_, _, ls)| *ls)
            .min()
    };
    let expected_h = |budget: u64| -> Option<f64> {
        let mut total = 0.0;
        for (xt, w) in block_xs.iter().zip(&mass) {
            total += w * h_at(xt, budget)? as f64;
        }
        Some(total / m as f64)
    };

    // brute force over the same class: instance with X = {0,1}^n,
    // codewords = per-symbol masks, d(x, S) = n − r inside, ∞ outside
    let instance = {
        let codewords: Vec<String> = masks.iter().map(|(p, _)| format!("mask({p})")).collect();
        let distortion = xs
            .iter()
            .map(|x| {
                masks
                    .iter()
                    .map(|(p, _)| {
                        p.is_prefix_of(x).then(|| {
                            BigRational::from_integer(BigInt::from((n - p.len()) as u64))
                        })
                    })
                    .collect()
            })
            .collect();
        RDInstance::new(source.clone(), codewords, distortion)?
    };

    let mut rows = Vec::new();
    for &rate in r_grid {
        let brute = brute_force_d(
            &instance,
            m,
            &BigRational::from_integer(BigInt::from(rate)),
        )
        .ok();
        rows.push(ExpStructRow {
            rate,
            expected_h: expected_h(m as u64 * rate),
            brute_distortion: brute.map(|b| rational_to_f64(&b.distortion)),
        });
    }
    // measured left shift
    let mut measured_shift = None;
    'shift: for s in 0..=max_cost {
        for row in &rows {
            let Some(d) = row.brute_distortion else {
                continue;
            };
            match expected_h(m as u64 * row.rate + s) {
                Some(eh) if eh <= d + 1e-9 => {}
                _ => continue 'shift,
            }
        }
        measured_shift = Some(s);
        break;
    }
    Ok(ExpStructReport {
        rows,
        measured_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn floor_pow2_exact() {
        assert_eq!(floor_pow2(&rat(3, 1)), 8);
        assert_eq!(floor_pow2(&rat(3, 2)), 2); // 2^1.5 ≈ 2.83
        assert_eq!(floor_pow2(&rat(0, 1)), 1);
        assert_eq!(floor_pow2(&rat(7, 2)), 11); // 2^3.5 ≈ 11.31
    }

    #[test]
    fn brute_force_set_distortion_diagonal() {
        // set-distortion instance: D*_1(R) = n − R at integer R
        for n in 1..=3usize {
            let instance = RDInstance::uniform_set_distortion(n).unwrap();
            for r in 0..=n as u64 {
                if n == 3 && r == 3 {
                    continue; // C(15,8) fine; kept for speed symmetry
                }
                let got = brute_force_d(&instance, 1, &rat(r as i64, 1)).unwrap();
                assert_eq!(
                    got.distortion,
                    rat((n as u64 - r) as i64, 1),
                    "n={n} R={r}"
                );
            }
        }
    }

    #[test]
    fn brute_force_identity_codebook_zero_distortion() {
        let instance = RDInstance::binary_hamming(rat(1, 3)).unwrap();
        let got = brute_force_d(&instance, 1, &rat(1, 1)).unwrap();
        assert_eq!(got.distortion, rat(0, 1));
    }

    #[test]
    fn brute_force_subadditivity() {
        // (n+m)·D*_{n+m}(R) ≤ n·D*_n(R) + m·D*_m(R)
        let instance = RDInstance::binary_hamming(rat(1, 2)).unwrap();
        let rate = rat(1, 2);
        let d: Vec<BigRational> = (1..=3)
            .map(|m| brute_force_d(&instance, m, &rate).unwrap().distortion)
            .collect();
        let two = BigRational::from_integer(BigInt::from(2));
        let three = BigRational::from_integer(BigInt::from(3));
        assert!(&two * &d[1] <= &d[0] + &d[0]);
        assert!(&three * &d[2] <= &d[0] + &two * &d[1]);
        assert!(&three * &d[2] <= &two * &d[1] + &d[0]);
    }

    #[test]
    fn brute_force_budget_guard() {
        let instance = RDInstance::uniform_set_distortion(4).unwrap();
        let err = brute_force_d(&instance, 1, &rat(4, 1)).unwrap_err();
        assert!(matches!(err, RdError::BudgetGuard { .. }));
    }

    #[test]
    fn ba_corners() {
        let instance = RDInstance::binary_hamming(rat(1, 3)).unwrap();
        let h = binary_entropy(1.0 / 3.0);
        // lossless corner
        let p = blahut_arimoto(&instance, BAQuery::Distortion(0.0), 1e-9, 2000).unwrap();
        assert!((p.rate - h).abs() < 1e-6, "rate {} vs H {}", p.rate, h);
        // zero-rate corner: D_max = min_y E d = 1/3
        let p = blahut_arimoto(&instance, BAQuery::Distortion(0.4), 1e-9, 2000).unwrap();
        assert_eq!(p.rate, 0.0);
        assert!((p.distortion - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn ba_matches_binary_hamming_closed_form() {
        // R(D) = H(p) − H(D) for p = 1/2, Hamming distortion
        let instance = RDInstance::binary_hamming(rat(1, 2)).unwrap();
        for target in [0.05, 0.1, 0.2, 0.3] {
            let p = blahut_arimoto(&instance, BAQuery::Distortion(target), 1e-10, 5000).unwrap();
            assert!(p.objective_monotone);
            let expect = 1.0 - binary_entropy(p.distortion);
            assert!(
                (p.rate - expect).abs() < 1e-5,
                "D={target}: rate {} vs {}",
                p.rate,
                expect
            );
        }
    }

    #[test]
    fn ba_lower_bounds_brute_force() {
        let instance = RDInstance::binary_hamming(rat(1, 2)).unwrap();
        for (m, rate) in [(1usize, rat(1, 2)), (2, rat(1, 2)), (3, rat(1, 2))] {
            let brute = brute_force_d(&instance, m, &rate).unwrap();
            let d = rational_to_f64(&brute.distortion);
            let ba = blahut_arimoto(&instance, BAQuery::Distortion(d), 1e-10, 5000).unwrap();
            assert!(
                ba.rate <= rational_to_f64(&rate) + 1e-6,
                "m={m}: BA rate {} exceeds block rate {}",
                ba.rate,
                rate
            );
        }
    }

    #[test]
    fn shannon_fano_closed_form_examples() {
        let half = rat(1, 2);
        assert_eq!(shannon_fano_rd_binary_d_of_r(&half, 1.0), 0.0);
        assert!((shannon_fano_rd_binary_d_of_r(&half, 0.5) - 0.5).abs() < 1e-12);
        assert!((shannon_fano_rd_binary_d_of_r(&half, 0.0) - 1.0).abs() < 1e-12);
        assert!((shannon_fano_rd_binary_r_of_d(&half, 0.25) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn alpha_oracle_matches_closed_form() {
        for p_num in 1..=5i64 {
            let p = rat(p_num, 10);
            let mut rate = 0.0;
            while rate <= 1.0 {
                let closed = shannon_fano_rd_binary_d_of_r(&p, rate);
                let oracle = alpha_channel_d_of_r(&p, rate);
                assert!(
                    (closed - oracle).abs() < 1e-6,
                    "p={p} R={rate}: {closed} vs {oracle}"
                );
                rate += 0.05;
            }
        }
    }

    #[test]
    fn spheres_partition() {
        let instance = RDInstance::uniform_set_distortion(3).unwrap();
        let spheres = distortion_spheres(&instance);
        // distinct radii at one center are disjoint
        for s in &spheres {
            for t in &spheres {
                if s.center == t.center && s.radius != t.radius {
                    assert!(s.elements.iter().all(|x| !t.elements.contains(x)));
                }
            }
        }
        // canonical covering is a partition: total assignment, one
        // sphere each, and assigned spheres contain their symbols
        let assignment = canonical_sphere_partition(&instance, &spheres);
        assert_eq!(assignment.len(), instance.source().len());
        for (x, &si) in assignment.iter().enumerate() {
            assert!(spheres[si].elements.contains(&x));
        }
    }

    #[test]
    fn expected_structfn_sandwich_small() {
        let n = 2;
        let source = Dist::uniform(1 << n);
        let report = expected_structfn_experiment(n, 1, &source, &[1, 2, 3]).unwrap();
        let shift = report.measured_shift.expect("shift found");
        for row in &report.rows {
            let (Some(eh), Some(d)) = (row.expected_h, row.brute_distortion) else {
                continue;
            };
            assert!(d <= eh + 1e-9, "right inequality at R={}", row.rate);
        }
        // the measured shift is about the family header cost
        assert!(shift <= crate::algstats::full_set_cost(n) + 10);
    }

    #[test]
    fn expected_structfn_m2_product() {
        let n = 1;
        let source = Dist::from_weights(&[2, 1]).unwrap();
        let report = expected_structfn_experiment(n, 2, &source, &[1, 5]).unwrap();
        // below the model-header cost E h is unreachable; the left
        // inequality enters through the measured shift instead
        assert!(report.rows[0].expected_h.is_none());
        assert!(report.rows[0].brute_distortion.is_some());
        assert!(report.measured_shift.is_some());
        for row in &report.rows {
            if let (Some(eh), Some(d)) = (row.expected_h, row.brute_distortion) {
                assert!(d <= eh + 1e-9, "right inequality at R={}", row.rate);
            }
        }
    }

    #[test]
    fn instance_parse() {
        let text = "0 1\na b c\n1/2 1/2\n0 1 inf\n1 0 2/3\n";
        let inst = RDInstance::parse(text).unwrap();
        assert_eq!(inst.codewords(), ["a", "b", "c"]);
        assert_eq!(inst.distortion(0, 2), None);
        assert_eq!(inst.distortion(1, 2), Some(&rat(2, 3)));
    }
}
