//! Charge-zero semi-infinite wedge space.
//!
//! Half-integers `i ∈ ℤ + 1/2` are stored shifted, `i = n + 1/2` with `n: i64`, so
//! "positive" half-integers are exactly `n ≥ 0`. The vector `v_λ` is the wedge of
//! `λ_k − k + 1/2` for `k ≥ 1`; in shifted form its index set is
//! `S(λ) = {λ_k − k}` (finitely many) together with every `n ≤ −ℓ(λ) − 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{factorial, int, Field, Rational};
use crate::QPoly;

/// Shifted half-integer: `n` stands for `n + 1/2`.
pub type HalfInt = i64;

/// Exact value of a shifted half-integer.
pub fn half(n: HalfInt) -> Rational {
    Rational::new(BigInt::from(2 * n + 1), BigInt::from(2))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    /// `λ_k − k` for `k = 1..ℓ`, strictly decreasing.
    pub fn displaced(&self) -> Vec<i64> {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &p)| p as i64 - (k as i64 + 1))
            .collect()
    }

    /// Whether `v_λ` contains the factor `n + 1/2`.
    pub fn contains(&self, n: HalfInt) -> bool {
        let l = self.0.len() as i64;
        if n < -l {
            return true;
        }
        if n < -l {
            return false;
        }
        self.displaced().contains(&n)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// All hook lengths.
    pub fn hooks(&self) -> Vec<u64> {
        let conj = self.conjugate();
        let mut out = Vec::new();
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                out.push((row as usize - j + conj.0[j] as usize - i - 1) as u64);
            }
        }
        out
    }

    /// Partitions of `n` in reverse lexicographic order, `(n)` first.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        rec(n, n, &mut cur, &mut out);
        out
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&[u32]> for Partition {
    fn from(parts: &[u32]) -> Self {
        Partition::new(parts.to_vec())
    }
}

pub fn energy(lambda: &Partition) -> u64 {
    lambda.size()
}

/// Finite combination of basis vectors with an energy cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<Partition, Rational>,
    cap: u64,
}

impl FockVector {
    pub fn zero(cap: u64) -> Self {
        FockVector {
            terms: BTreeMap::new(),
            cap,
        }
    }

    pub fn vacuum(cap: u64) -> Self {
        Self::basis(Partition::empty(), cap).expect("vacuum has energy 0")
    }

    pub fn basis(lambda: Partition, cap: u64) -> Result<Self> {
        let mut v = Self::zero(cap);
        v.add_term(lambda, Rational::one())?;
        Ok(v)
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Rational> {
        &self.terms
    }

    pub fn coeff(&self, lambda: &Partition) -> Rational {
        self.terms
            .get(lambda)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, lambda: Partition, c: Rational) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        let e = lambda.size();
        if e > self.cap {
            return Err(Error::EnergyOverflow {
                energy: e,
                cap: self.cap,
            });
        }
        let entry = self.terms.entry(lambda).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.cap);
        }
        FockVector {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            cap: self.cap,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.cap = self.cap.max(other.cap);
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone()).expect("within cap");
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }
}

/// Sign and result of replacing the factor `from` of `v_λ` by `to`, if nonzero.
fn replace(lambda: &Partition, from: HalfInt, to: HalfInt) -> Option<(bool, Partition)> {
    if !lambda.contains(from) || lambda.contains(to) {
        return None;
    }
    let l = lambda.len() as i64;
    let d = lambda.displaced();
    let (lo, hi) = (from.min(to), from.max(to));
    // elements of S strictly between lo and hi
    let finite = d.iter().filter(|&&x| x > lo && x < hi).count() as i64;
    let sea_hi = (hi - 1).min(-l - 1);
    let sea = (sea_hi - (lo + 1) + 1).max(0);
    let negative = (finite + sea) % 2 == 1;

    let w = lo.min(-l - 1) - 1;
    let mut elems: Vec<i64> = d.into_iter().filter(|&x| x != from).collect();
    elems.extend((w..=-l - 1).filter(|&x| x != from));
    elems.push(to);
    elems.sort_unstable_by(|a, b| b.cmp(a));
    let parts = elems
        .iter()
        .enumerate()
        .map(|(k, &e)| e + k as i64 + 1)
        .take_while(|&p| p > 0)
        .map(|p| p as u32)
        .collect();
    Some((negative, Partition(parts)))
}

/// Nonzero terms of `Σ_l E_{l−a,l} v_λ`: `(l, sign, result)`; for `a = 0`, `sign`
/// is the regularised diagonal action (`+1` for `l ∈ S, l > 0`, `−1` for
/// `l ∉ S, l < 0`).
pub fn band_terms(a: i64, lambda: &Partition) -> Vec<(HalfInt, i8, Partition)> {
    let l = lambda.len() as i64;
    let d = lambda.displaced();
    let mut out = Vec::new();
    if a == 0 {
        for &x in d.iter().filter(|&&x| x >= 0) {
            out.push((x, 1, lambda.clone()));
        }
        for x in -l..0 {
            if !d.contains(&x) {
                out.push((x, -1, lambda.clone()));
            }
        }
        return out;
    }
    let top = d.first().copied().unwrap_or(-1);
    for x in (a - l)..=top {
        if let Some((neg, mu)) = replace(lambda, x, x - a) {
            out.push((x, if neg { -1 } else { 1 }, mu));
        }
    }
    out
}

pub fn apply_e(i: HalfInt, j: HalfInt, v: &FockVector) -> Result<FockVector> {
    let mut out = FockVector::zero(v.cap);
    for (lambda, c) in &v.terms {
        if i == j {
            let keep = if j >= 0 {
                lambda.contains(j)
            } else {
                !lambda.contains(j)
            };
            if keep {
                let sign = if j >= 0 { c.clone() } else { -c.clone() };
                out.add_term(lambda.clone(), sign)?;
            }
        } else if let Some((neg, mu)) = replace(lambda, j, i) {
            out.add_term(mu, if neg { -c.clone() } else { c.clone() })?;
        }
    }
    Ok(out)
}

/// `Σ_l g(l) E_{l−a,l} + scalar·Id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandOperator {
    pub shift: i64,
    pub coeff: QPoly,
    pub scalar: Rational,
}

impl BandOperator {
    pub fn new(shift: i64, coeff: QPoly) -> Self {
        BandOperator {
            shift,
            coeff,
            scalar: Rational::zero(),
        }
    }

    pub fn alpha(n: i64) -> Self {
        Self::new(n, QPoly::one())
    }
}

pub fn apply_band(op: &BandOperator, v: &FockVector) -> Result<FockVector> {
    let mut out = v.scale(&op.scalar);
    if op.coeff.is_zero() {
        return Ok(out);
    }
    for (lambda, c) in &v.terms {
        for (l, sign, mu) in band_terms(op.shift, lambda) {
            let g = op.coeff.eval(&half(l));
            if g.is_zero() {
                continue;
            }
            let term = if sign < 0 { -(g * c) } else { g * c };
            out.add_term(mu, term)?;
        }
    }
    Ok(out)
}

pub fn apply_alpha(n: i64, v: &FockVector) -> Result<FockVector> {
    assert!(n != 0, "α_0 is not part of the representation");
    apply_band(&BandOperator::alpha(n), v)
}

/// Eigenvalue of `ℱ_n` on `v_λ`.
pub fn f_eigenvalue(n: u32, lambda: &Partition) -> Rational {
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let k = k as i64;
            half(p as i64 - k - 1).pow_u(n as u64) - half(-k - 1).pow_u(n as u64)
        })
        .fold(Rational::zero(), |a, b| a + b)
}

pub fn apply_f(n: u32, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero(v.cap);
    for (lambda, c) in &v.terms {
        out.add_term(lambda.clone(), c * f_eigenvalue(n, lambda))
            .expect("diagonal action preserves energy");
    }
    out
}

/// `χ^λ` on the cycle type `(q^k)`, `qk = |λ|`, via q-core removal and the
/// q-quotient hook formula.
pub fn rim_hook_character(lambda: &Partition, q: u32) -> BigInt {
    let n = lambda.size();
    if !n.is_multiple_of(q as u64) {
        return BigInt::zero();
    }
    let k = n / q as u64;
    let l = lambda.len() as i64;
    let mut beads: Vec<i64> = lambda.displaced().iter().map(|x| x + l).collect();
    let q = q as i64;
    let mut negative = false;
    loop {
        let mv = beads
            .iter()
            .copied()
            .find(|&b| b - q >= 0 && !beads.contains(&(b - q)));
        let Some(b) = mv else { break };
        let between = beads.iter().filter(|&&x| x > b - q && x < b).count();
        negative ^= between % 2 == 1;
        for x in beads.iter_mut() {
            if *x == b {
                *x = b - q;
            }
        }
    }
    let m = beads.len() as i64;
    if beads.iter().any(|&x| x >= m) {
        return BigInt::zero();
    }
    let prod = lambda
        .hooks()
        .into_iter()
        .filter(|h| h % q as u64 == 0)
        .fold(BigInt::one(), |acc, h| acc * BigInt::from(h / q as u64));
    let value = factorial(k) / prod;
    if negative {
        -value
    } else {
        value
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    E(HalfInt, HalfInt),
    Alpha(i64),
    F(u32),
    Band(BandOperator),
    Scalar(Rational),
}

impl Op {
    fn energy(&self) -> i64 {
        match self {
            Op::E(i, j) => j - i,
            Op::Alpha(n) => *n,
            Op::Band(b) if !b.coeff.is_zero() => b.shift,
            _ => 0,
        }
    }
}

pub fn apply_op(op: &Op, v: &FockVector) -> Result<FockVector> {
    match op {
        Op::E(i, j) => apply_e(*i, *j, v),
        Op::Alpha(n) => apply_alpha(*n, v),
        Op::F(n) => Ok(apply_f(*n, v)),
        Op::Band(b) => apply_band(b, v),
        Op::Scalar(c) => Ok(v.scale(c)),
    }
}

/// Pairing `⟨0| α_q^k v⟩` computed in closed form.
pub fn covacuum_alpha_pairing(q: u32, k: u64, v: &FockVector) -> Rational {
    v.terms()
        .iter()
        .filter(|(lambda, _)| lambda.size() == q as u64 * k)
        .map(|(lambda, c)| c * Rational::from_integer(rim_hook_character(lambda, q)))
        .fold(Rational::zero(), |a, b| a + b)
}

/// `⟨0| ops[0] ops[1] ⋯ |0⟩` with energy cap `cap`.
///
/// A leading run of identical positive `α_q` is paired with the covacuum in
/// closed form instead of being applied.
pub fn vev(ops: &[Op], cap: u64) -> Result<Rational> {
    let total: i64 = ops.iter().map(Op::energy).sum();
    let mut scalar = Rational::one();
    let mut start = 0;
    while let Some(Op::Scalar(c)) = ops.get(start) {
        scalar *= c;
        start += 1;
    }
    if total != 0 || scalar.is_zero() {
        return Ok(Rational::zero());
    }
    let (run_q, run_len) = match ops.get(start) {
        Some(Op::Alpha(q)) if *q > 0 => {
            let len = ops[start..]
                .iter()
                .take_while(|op| **op == Op::Alpha(*q))
                .count();
            (*q as u32, len)
        }
        _ => (0, 0),
    };
    let mut v = FockVector::vacuum(cap);
    for op in ops[start + run_len..].iter().rev() {
        v = apply_op(op, &v)?;
        if v.is_zero() {
            return Ok(Rational::zero());
        }
    }
    let value = if run_len > 0 {
        covacuum_alpha_pairing(run_q, run_len as u64, &v)
    } else {
        v.coeff(&Partition::empty())
    };
    Ok(scalar * value)
}

/// Central term of `[Σ g(l)E_{l−a,l}, Σ f(k)E_{k−b,k}]`, nonzero only for `a + b = 0`.
pub fn band_commutator_scalar(g: &QPoly, a: i64, f: &QPoly, b: i64) -> Rational {
    if a + b != 0 {
        return Rational::zero();
    }
    let mut s = Rational::zero();
    if a > 0 {
        for l in 0..a {
            s += g.eval(&half(l)) * f.eval(&half(l - a));
        }
    }
    // From the E-commutator: l < 0 < l + b contributes −1.
    if b > 0 {
        for l in -b..0 {
            s -= g.eval(&half(l)) * f.eval(&half(l + b));
        }
    }
    s
}

/// The band part `Σ_l (g(l−b)f(l) − g(l)f(l−a)) E_{l−(a+b),l}` of `[A, B]`.
pub fn band_commutator(g: &QPoly, a: i64, f: &QPoly, b: i64) -> BandOperator {
    let gb = g.shift(&int(-b));
    let fa = f.shift(&int(-a));
    BandOperator {
        shift: a + b,
        coeff: &(&gb * f) - &(g * &fa),
        scalar: band_commutator_scalar(g, a, f, b),
    }
}

/// Energy cap for a profile.
pub fn profile_cap(mu: &[u32]) -> u64 {
    mu.iter().map(|&m| m as u64).sum()
}
