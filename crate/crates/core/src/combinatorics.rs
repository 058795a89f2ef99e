//! Exact q-analog counting and the success/failure probability formulas for
//! uniformly drawn sum-rank errors.
//!
//! Everything here is big-integer or big-rational arithmetic; floating point
//! only appears when a value is rendered through [`ExactProbability::log10`]
//! or [`ExactProbability::to_f64`]. The probability formulas assume a
//! constant block length `eta` (every block of the partition has the same
//! size).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::is_prime;

/// A probability held as an exact fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactProbability {
    numerator: BigUint,
    denominator: BigUint,
}

impl ExactProbability {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        if numerator > denominator {
            return Err(Error::Domain("probability exceeds one".into()));
        }
        Ok(Self { numerator, denominator })
    }

    pub fn zero() -> Self {
        Self {
            numerator: BigUint::zero(),
            denominator: BigUint::one(),
        }
    }

    pub fn one() -> Self {
        Self {
            numerator: BigUint::one(),
            denominator: BigUint::one(),
        }
    }

    /// Clamps a rational into [0, 1]; the flag reports whether clamping
    /// changed the value.
    pub fn from_rational_clamped(r: &BigRational) -> (Self, bool) {
        if r.is_negative() {
            return (Self::zero(), true);
        }
        if *r > BigRational::one() {
            return (Self::one(), true);
        }
        let numerator = r.numer().to_biguint().expect("non-negative");
        let denominator = r.denom().to_biguint().expect("positive");
        (Self { numerator, denominator }, false)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator.clone()),
            BigInt::from(self.denominator.clone()),
        )
    }

    /// Lowest-terms copy.
    pub fn reduced(&self) -> Self {
        let g = self.numerator.gcd(&self.denominator);
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self {
            numerator: &self.numerator / &g,
            denominator: &self.denominator / &g,
        }
    }

    pub fn complement(&self) -> Self {
        Self {
            numerator: &self.denominator - &self.numerator,
            denominator: self.denominator.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// log10 of the value; `-inf` for an exact zero.
    pub fn log10(&self) -> f64 {
        if self.numerator.is_zero() {
            return f64::NEG_INFINITY;
        }
        big_log10(&self.numerator) - big_log10(&self.denominator)
    }

    pub fn to_f64(&self) -> f64 {
        if self.numerator.is_zero() {
            0.0
        } else {
            10f64.powf(self.log10())
        }
    }
}

impl PartialOrd for ExactProbability {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactProbability {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.numerator * &other.denominator).cmp(&(&other.numerator * &self.denominator))
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        write!(f, "{}/{}", r.numerator, r.denominator)
    }
}

fn big_log10(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        if let Some(v) = x.to_f64() {
            if v.is_finite() {
                return v.log10();
            }
        }
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

pub(crate) fn big_pow(q: u32, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

/// Number of `b`-dimensional subspaces of GF(q)^a.
pub fn gaussian_binomial(a: u32, b: u32, q: u32) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..b {
        num *= big_pow(q, (a - j) as u64) - 1u32;
        den *= big_pow(q, (j + 1) as u64) - 1u32;
    }
    num / den
}

/// Number of `rows x cols` matrices over GF(q) of rank `r`.
pub fn num_matrices_rank(rows: u32, cols: u32, r: u32, q: u32) -> BigUint {
    if r > rows.min(cols) {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    let qr = big_pow(q, r as u64);
    let qa = big_pow(q, rows as u64);
    let qb = big_pow(q, cols as u64);
    for j in 0..r {
        let qj = big_pow(q, j as u64);
        num *= (&qa - &qj) * (&qb - &qj);
        den *= &qr - &qj;
    }
    num / den
}

/// Parameters of the constant-block-length probability analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountParams {
    pub q: u32,
    pub m: u32,
    /// Interleaving order.
    pub s: u32,
    /// Block length shared by every block.
    pub eta: u32,
    /// Number of blocks.
    pub ell: u32,
    /// Sum-rank weight.
    pub t: u32,
}

impl CountParams {
    pub fn new(q: u32, m: u32, s: u32, eta: u32, ell: u32, t: u32) -> Result<Self> {
        if q < 2 || !is_prime(q as u64) {
            return Err(Error::Domain(format!("q = {q} is not a prime")));
        }
        if m == 0 || s == 0 || eta == 0 || ell == 0 {
            return Err(Error::Domain("m, s, eta and ell must be positive".into()));
        }
        let p = Self { q, m, s, eta, ell, t };
        if t > p.mu() * ell {
            return Err(Error::Domain(format!(
                "weight {t} exceeds the maximum sum-rank weight {}",
                p.mu() * ell
            )));
        }
        Ok(p)
    }

    /// Maximum GF(q)-rank of one block, `min(s*m, eta)`.
    pub fn mu(&self) -> u32 {
        (self.s * self.m).min(self.eta)
    }

    pub fn n(&self) -> u32 {
        self.eta * self.ell
    }

    pub fn with_t(self, t: u32) -> Result<Self> {
        Self::new(self.q, self.m, self.s, self.eta, self.ell, t)
    }

    pub fn with_s(self, s: u32) -> Result<Self> {
        Self::new(self.q, self.m, s, self.eta, self.ell, self.t)
    }
}

/// `prod_{j<t} (q^{sm} - q^{jm})`: the number of full-rank s x t matrices
/// over GF(q^m).
fn full_rank_count(p: &CountParams) -> BigUint {
    let qsm = big_pow(p.q, (p.s * p.m) as u64);
    (0..p.t).fold(BigUint::one(), |acc, j| acc * (&qsm - big_pow(p.q, (j * p.m) as u64)))
}

/// Rank-profile counts per block, `NM_q(sm, eta, v)` for `v = 0..=mu`.
fn block_weights(p: &CountParams) -> Vec<BigUint> {
    (0..=p.mu())
        .map(|v| num_matrices_rank(p.s * p.m, p.eta, v, p.q))
        .collect()
}

/// `|E_t|`: number of s x n matrices over GF(q^m) with sum-rank weight t,
/// by the same (t', l') table recursion used for [`phi`].
pub fn count_weight_t_errors(p: &CountParams) -> BigUint {
    let w = block_weights(p);
    let t = p.t as usize;
    let mut prev: Vec<BigUint> = (0..=t).map(|x| w.get(x).cloned().unwrap_or_default()).collect();
    for _ in 2..=p.ell {
        let mut cur = vec![BigUint::zero(); t + 1];
        for (tp, slot) in cur.iter_mut().enumerate() {
            for tpp in 0..=tp.min(w.len() - 1) {
                *slot += &prev[tp - tpp] * &w[tpp];
            }
        }
        prev = cur;
    }
    prev.swap_remove(t)
}

/// Suffix counts for a general partition: `table[i][r]` is the number of
/// ways blocks `i..` of an `s x n` error can carry total GF(q)-rank `r`.
pub(crate) fn suffix_counts(blocks: &[usize], sm: u32, q: u32, t: usize) -> Vec<Vec<BigUint>> {
    let ell = blocks.len();
    let mut table = vec![vec![BigUint::zero(); t + 1]; ell + 1];
    table[ell][0] = BigUint::one();
    for i in (0..ell).rev() {
        let mu = (sm as usize).min(blocks[i]);
        let w: Vec<BigUint> = (0..=mu.min(t))
            .map(|v| num_matrices_rank(sm, blocks[i] as u32, v as u32, q))
            .collect();
        for r in 0..=t {
            let mut acc = BigUint::zero();
            for (v, wv) in w.iter().enumerate().take(r + 1) {
                acc += wv * &table[i + 1][r - v];
            }
            table[i][r] = acc;
        }
    }
    table
}

/// Value of `Phi_{q,eta}(t, ell)` and the number of big-integer
/// multiplications the table recursion performed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiValue {
    pub value: BigUint,
    pub multiplications: u64,
}

/// Sum over rank profiles of the product of q-binomials `[eta choose t_i]`,
/// by the bottom-up `N(t', l')` table. Products with `[eta choose 0] = 1`
/// are additions and not counted as multiplications.
pub fn phi(p: &CountParams) -> PhiValue {
    let t = p.t as usize;
    let mu = p.mu() as usize;
    let binom: Vec<BigUint> = (0..=mu.min(t))
        .map(|v| gaussian_binomial(p.eta, v as u32, p.q))
        .collect();
    // N(t', 1)
    let mut prev: Vec<BigUint> = (0..=t).map(|tp| binom.get(tp).cloned().unwrap_or_default()).collect();
    let mut multiplications = 0u64;
    for _ in 2..=p.ell {
        let mut cur = vec![BigUint::zero(); t + 1];
        for (tp, slot) in cur.iter_mut().enumerate() {
            *slot += &prev[tp];
            for tpp in 1..=tp.min(mu) {
                *slot += &prev[tp - tpp] * &binom[tpp];
                multiplications += 1;
            }
        }
        prev = cur;
    }
    PhiValue {
        value: prev.swap_remove(t),
        multiplications,
    }
}

/// Probability that a uniform weight-t error has GF(q^m)-rank t.
pub fn full_rank_probability(p: &CountParams) -> ExactProbability {
    if p.t == 0 {
        return ExactProbability::one();
    }
    if p.t > p.s {
        return ExactProbability::zero();
    }
    let num = full_rank_count(p) * phi(p).value;
    let den = count_weight_t_errors(p);
    let r = BigRational::new(BigInt::from(num), BigInt::from(den));
    ExactProbability::from_rational_clamped(&r).0
}

/// `min(1, t * q^{-m(s-t+1)})`.
pub fn failure_upper_bound(p: &CountParams) -> ExactProbability {
    if p.t == 0 {
        return ExactProbability::zero();
    }
    let e = p.m as i64 * (p.s as i64 - p.t as i64 + 1);
    if e <= 0 {
        return ExactProbability::one();
    }
    let r = BigRational::new(BigInt::from(p.t), BigInt::from(big_pow(p.q, e as u64)));
    ExactProbability::from_rational_clamped(&r).0
}

/// All rank profiles of `ell` blocks with entries in `0..=mu` summing to `t`,
/// in lexicographic order.
pub fn profiles(t: u32, ell: u32, mu: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, left: u32, mu: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rem > mu * left {
            return;
        }
        for v in 0..=mu.min(rem) {
            cur.push(v);
            rec(rem - v, left - 1, mu, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, ell, mu, &mut Vec::new(), &mut out);
    out
}

/// Profiles grouped by multiset: `counts[v]` blocks have rank v. Each class
/// carries its number of orderings.
#[derive(Debug, Clone)]
struct ProfileClass {
    counts: Vec<u32>,
    multiplicity: BigUint,
}

fn profile_classes(t: u32, ell: u32, mu: u32) -> Vec<ProfileClass> {
    fn rec(v: u32, rem_t: u32, rem_ell: u32, counts: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if v == 0 {
            if rem_t == 0 {
                counts[0] = rem_ell;
                out.push(counts.clone());
            }
            return;
        }
        let max_c = (rem_t / v).min(rem_ell);
        for c in 0..=max_c {
            counts[v as usize] = c;
            rec(v - 1, rem_t - c * v, rem_ell - c, counts, out);
        }
        counts[v as usize] = 0;
    }
    let mut raw = Vec::new();
    rec(mu, t, ell, &mut vec![0; mu as usize + 1], &mut raw);
    let fact = |n: u32| (1..=n).fold(BigUint::one(), |a, k| a * k);
    raw.into_iter()
        .map(|counts| {
            let den = counts.iter().fold(BigUint::one(), |a, &c| a * fact(c));
            ProfileClass {
                multiplicity: fact(ell) / den,
                counts,
            }
        })
        .collect()
}

/// Marginal probability of a rank profile for a uniform weight-t error.
pub fn profile_marginal(p: &CountParams, profile: &[u32]) -> Result<ExactProbability> {
    if profile.len() != p.ell as usize || profile.iter().sum::<u32>() != p.t || profile.iter().any(|&v| v > p.mu()) {
        return Err(Error::Domain(format!("{profile:?} is not a feasible rank profile")));
    }
    let w = block_weights(p);
    let num = profile.iter().fold(BigUint::one(), |a, &v| a * &w[v as usize]);
    ExactProbability::new(num, count_weight_t_errors(p))
}

/// Parameters for the decoding-condition bounds: the counting parameters
/// plus the code length and dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionParams {
    pub count: CountParams,
    pub n: u32,
    pub k: u32,
}

impl ConditionParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(q: u32, m: u32, n: u32, k: u32, s: u32, eta: u32, ell: u32, t: u32) -> Result<Self> {
        let count = CountParams::new(q, m, s, eta, ell, t)?;
        if n != eta * ell {
            return Err(Error::Domain(format!("n = {n} but eta * ell = {}", eta * ell)));
        }
        if k >= n || t + 1 > n - k {
            return Err(Error::Domain(format!(
                "need t <= n - k - 1 (t = {t}, n = {n}, k = {k})"
            )));
        }
        Ok(Self { count, n, k })
    }
}

/// Lower and upper bounds on the probability that the decoding condition
/// holds for a random parity-check matrix and a full-rank uniform error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionBounds {
    pub lower: ExactProbability,
    pub upper: ExactProbability,
    /// The raw lower-bound expression was negative and was clamped to 0.
    pub lower_clamped: bool,
}

fn rat(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `prod_{j=0}^{upto-1} (1 - q^{-m(n-k-j)})`.
fn column_independence(cp: &ConditionParams, upto: u32) -> BigRational {
    let p = &cp.count;
    (0..upto).fold(BigRational::one(), |acc, j| {
        let d = big_pow(p.q, (p.m * (cp.n - cp.k - j)) as u64);
        acc * rat(&d - 1u32, d)
    })
}

/// Number of candidate vectors outside the support, capped at `q^{m(n-k)}`.
fn candidate_count(cp: &ConditionParams, counts: &[u32]) -> BigUint {
    let p = &cp.count;
    let qe = big_pow(p.q, p.eta as u64);
    let sum = counts
        .iter()
        .enumerate()
        .fold(BigUint::zero(), |acc, (v, &c)| acc + (&qe - big_pow(p.q, v as u64)) * c);
    sum.min(big_pow(p.q, (p.m * (cp.n - cp.k)) as u64))
}

pub fn condition_bounds(cp: &ConditionParams) -> ConditionBounds {
    let p = &cp.count;
    let total = count_weight_t_errors(p);
    let w = block_weights(p);
    let d = big_pow(p.q, (p.m * (cp.n - cp.k - p.t)) as u64);
    let mut acc = BigUint::zero();
    for class in profile_classes(p.t, p.ell, p.mu()) {
        let prod = class.counts.iter().enumerate().fold(BigUint::one(), |a, (v, &c)| {
            a * num_traits::pow(w[v].clone(), c as usize)
        });
        acc += prod * &class.multiplicity * candidate_count(cp, &class.counts);
    }
    let union = rat(acc, total * d);
    let raw_lower = (BigRational::one() - union) * column_independence(cp, p.t);
    let (lower, lower_clamped) = ExactProbability::from_rational_clamped(&raw_lower);
    let (upper, _) = ExactProbability::from_rational_clamped(&column_independence(cp, p.t + 1));
    ConditionBounds {
        lower,
        upper,
        lower_clamped,
    }
}

/// Largest exponentiation (in result bits) the approximation will attempt.
const APPROX_BIT_BUDGET: u64 = 1 << 26;

/// Success probability of the decoding condition when the per-vector
/// dependence events are treated as independent.
pub fn condition_approximation(cp: &ConditionParams) -> Result<ExactProbability> {
    let p = &cp.count;
    let total = count_weight_t_errors(p);
    let w = block_weights(p);
    let d = big_pow(p.q, (p.m * (cp.n - cp.k - p.t)) as u64);
    let d_minus = &d - 1u32;
    let mut sum = BigRational::zero();
    for class in profile_classes(p.t, p.ell, p.mu()) {
        let prod = class.counts.iter().enumerate().fold(BigUint::one(), |a, (v, &c)| {
            a * num_traits::pow(w[v].clone(), c as usize)
        });
        let n_t = candidate_count(cp, &class.counts);
        let n_t = n_t
            .to_u64()
            .filter(|&e| e.saturating_mul(d.bits()) <= APPROX_BIT_BUDGET)
            .ok_or_else(|| Error::BudgetExceeded(format!("(1 - 1/{d})^{n_t} is too large to expand exactly")))?;
        let pow = rat(
            num_traits::pow(d_minus.clone(), n_t as usize),
            num_traits::pow(d.clone(), n_t as usize),
        );
        sum += rat(prod * &class.multiplicity, total.clone()) * pow;
    }
    let value = column_independence(cp, p.t) * sum;
    Ok(ExactProbability::from_rational_clamped(&value).0)
}
