//! q-orbifold r-spin Hurwitz numbers as vacuum expectations, with independent
//! character-sum and permutation-count oracles.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{apply_alpha, f_eigenvalue, rim_hook_character, vev, FockVector, Op, Partition};
use crate::scalar::{factorial, int, Field, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HurwitzKey {
    pub g: u32,
    pub q: u32,
    pub r: u32,
    pub mu: Vec<u32>,
}

impl HurwitzKey {
    pub fn new(g: u32, q: u32, r: u32, mu: &[u32]) -> Self {
        HurwitzKey {
            g,
            q,
            r,
            mu: mu.to_vec(),
        }
    }

    pub fn size(&self) -> u64 {
        self.mu.iter().map(|&m| m as u64).sum()
    }
}

/// Number `b` of completed `(r+1)`-cycles, if it is a non-negative integer.
pub fn completed_cycle_count(key: &HurwitzKey) -> Option<u64> {
    let d = key.size();
    if key.q == 0 || key.r == 0 || !d.is_multiple_of(key.q as u64) {
        return None;
    }
    let num = 2 * key.g as i64 - 2 + key.mu.len() as i64 + (d / key.q as u64) as i64;
    if num < 0 || num % key.r as i64 != 0 {
        return None;
    }
    Some((num / key.r as i64) as u64)
}

pub fn disconnected_hurwitz(key: &HurwitzKey) -> Rational {
    let Some(b) = completed_cycle_count(key) else {
        return Rational::zero();
    };
    disconnected_by_cycle_count(key.q, key.r, &key.mu, b)
}

/// The disconnected number with `b` completed cycles, whatever Euler
/// characteristic that forces; disconnected covers may have `g < 0`.
pub fn disconnected_by_cycle_count(q: u32, r: u32, mu: &[u32], b: u64) -> Rational {
    let d: u64 = mu.iter().map(|&m| m as u64).sum();
    if q == 0 || r == 0 || !d.is_multiple_of(q as u64) {
        return Rational::zero();
    }
    let spectrum = profile_spectrum(q, r, mu);
    let sum = spectrum
        .iter()
        .fold(Rational::zero(), |acc, (w, f)| acc + w * f.pow_u(b));
    sum / normalization(q, r, mu, b)
}

fn normalization(q: u32, r: u32, mu: &[u32], b: u64) -> Rational {
    let k = mu.iter().map(|&m| m as u64).sum::<u64>() / q as u64;
    let mut norm = int(q as i64).pow_u(k)
        * Rational::from_integer(factorial(k) * factorial(b))
        * int(r as i64 + 1).pow_u(b);
    for &m in mu {
        norm *= int(m as i64);
    }
    norm
}

/// Same number, by applying every operator of the vacuum expectation in turn.
pub fn disconnected_hurwitz_vev(key: &HurwitzKey) -> Rational {
    let Some(b) = completed_cycle_count(key) else {
        return Rational::zero();
    };
    let k = key.size() / key.q as u64;
    let mut ops = vec![Op::Scalar(
        Rational::one() / normalization(key.q, key.r, &key.mu, b),
    )];
    ops.extend((0..k).map(|_| Op::Alpha(key.q as i64)));
    ops.extend((0..b).map(|_| Op::F(key.r + 1)));
    ops.extend(key.mu.iter().map(|&m| Op::Alpha(-(m as i64))));
    vev(&ops, key.size()).expect("intermediate energies stay within |μ|")
}

type SpectrumKey = (u32, u32, Vec<u32>);
type Spectrum = Arc<Vec<(Rational, Rational)>>;

fn spectrum_memo() -> &'static RwLock<HashMap<SpectrumKey, Spectrum>> {
    static MEMO: OnceLock<RwLock<HashMap<SpectrumKey, Spectrum>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Pairs `(⟨α_q^k v_λ⟩·⟨v_λ|Π α_{−μ_i}|0⟩, F_{r+1}(λ))` over the support of
/// `Π α_{−μ_i}|0⟩`; independent of the genus.
fn profile_spectrum(q: u32, r: u32, mu: &[u32]) -> Spectrum {
    let mut sorted = mu.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mk = (q, r, sorted);
    if let Some(s) = spectrum_memo().read().expect("memo").get(&mk) {
        return s.clone();
    }
    let d: u64 = mu.iter().map(|&m| m as u64).sum();
    let mut v = FockVector::vacuum(d);
    for &m in mu {
        v = apply_alpha(-(m as i64), &v).expect("energy stays within |μ|");
    }
    let spectrum: Vec<(Rational, Rational)> = v
        .terms()
        .iter()
        .filter_map(|(lambda, c)| {
            let chi = rim_hook_character(lambda, q);
            (!chi.is_zero()).then(|| (c * Rational::from_integer(chi), f_eigenvalue(r + 1, lambda)))
        })
        .collect();
    let spectrum = Arc::new(spectrum);
    spectrum_memo()
        .write()
        .expect("memo")
        .insert(mk, spectrum.clone());
    spectrum
}

type MemoKey = (u32, u32, u32, Vec<u32>);

fn memo() -> &'static RwLock<HashMap<MemoKey, Rational>> {
    static MEMO: OnceLock<RwLock<HashMap<MemoKey, Rational>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Set partitions of `{0..n}` as block lists, via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == rgs.len() {
            let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
            let mut blocks = vec![Vec::new(); k];
            for (idx, &b) in rgs.iter().enumerate() {
                blocks[b].push(idx);
            }
            out.push(blocks);
            return;
        }
        for b in 0..=max {
            rgs[i] = b;
            rec(i + 1, if b == max { max + 1 } else { max }, rgs, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(0, 0, &mut rgs, &mut out);
    out
}

/// Genus vectors `(g_1..g_k)` with `Σ g_i = total`.
fn compositions(total: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    if k == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Connected numbers by inclusion–exclusion over set partitions of the parts.
pub fn connected_hurwitz(key: &HurwitzKey) -> Rational {
    let mut sorted = key.mu.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mk = (key.g, key.q, key.r, sorted.clone());
    if let Some(v) = memo().read().expect("memo").get(&mk) {
        return v.clone();
    }
    let base = HurwitzKey::new(key.g, key.q, key.r, &sorted);
    let mut value = disconnected_hurwitz(&base);
    if completed_cycle_count(&base).is_none() {
        value = Rational::zero();
    } else if sorted.len() > 1 {
        for blocks in set_partitions(sorted.len()) {
            let k = blocks.len();
            if k < 2 {
                continue;
            }
            let parts: Vec<Vec<u32>> = blocks
                .iter()
                .map(|b| b.iter().map(|&i| sorted[i]).collect())
                .collect();
            if parts
                .iter()
                .any(|p| p.iter().map(|&m| m as u64).sum::<u64>() % key.q as u64 != 0)
            {
                continue;
            }
            for genera in compositions(key.g + k as u32 - 1, k) {
                let mut term = Rational::one();
                for (p, &gb) in parts.iter().zip(&genera) {
                    let sub = HurwitzKey::new(gb, key.q, key.r, p);
                    if completed_cycle_count(&sub).is_none() {
                        term = Rational::zero();
                        break;
                    }
                    term *= connected_hurwitz(&sub);
                    if term.is_zero() {
                        break;
                    }
                }
                value -= term;
            }
        }
    }
    memo().write().expect("memo").insert(mk, value.clone());
    value
}

/// Coefficient of `e^{Σ μ_i x_i}` in the free energy `F_{g,n}`.
pub fn free_energy_coeff(g: u32, n: usize, q: u32, r: u32, mu: &[u32]) -> Result<Rational> {
    if mu.len() != n {
        return Err(Error::InvalidInput(format!(
            "profile has {} parts, expected {n}",
            mu.len()
        )));
    }
    Ok(connected_hurwitz(&HurwitzKey::new(g, q, r, mu)))
}

fn beta_set(lambda: &[u32], len: usize) -> Vec<i64> {
    (0..len)
        .map(|k| lambda.get(k).copied().unwrap_or(0) as i64 - k as i64 - 1 + len as i64)
        .collect()
}

fn mn_rec(beads: &[i64], rho: &[u32], memo: &mut BTreeMap<(Vec<i64>, usize), BigInt>) -> BigInt {
    if rho.is_empty() {
        return BigInt::one();
    }
    let key = (beads.to_vec(), rho.len());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let m = rho[0] as i64;
    let mut total = BigInt::zero();
    for (idx, &b) in beads.iter().enumerate() {
        if b - m < 0 || beads.contains(&(b - m)) {
            continue;
        }
        let between = beads.iter().filter(|&&x| x > b - m && x < b).count();
        let mut next = beads.to_vec();
        next[idx] = b - m;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let v = mn_rec(&next, &rho[1..], memo);
        if between % 2 == 1 {
            total -= v;
        } else {
            total += v;
        }
    }
    memo.insert(key, total.clone());
    total
}

/// `χ^λ_ρ` by Murnaghan–Nakayama border-strip removal.
pub fn mn_character(lambda: &Partition, rho: &Partition) -> Result<BigInt> {
    if lambda.size() != rho.size() {
        return Err(Error::SizeMismatch {
            left: lambda.size(),
            right: rho.size(),
        });
    }
    let beads = beta_set(lambda.parts(), lambda.len());
    Ok(mn_rec(&beads, rho.parts(), &mut BTreeMap::new()))
}

/// Diagonalised evaluation of the defining vacuum expectation.
pub fn character_oracle(key: &HurwitzKey) -> Rational {
    let Some(b) = completed_cycle_count(key) else {
        return Rational::zero();
    };
    let d = key.size();
    let k = d / key.q as u64;
    let rho_q = Partition::new(vec![key.q; k as usize]);
    let rho_mu = Partition::new(key.mu.clone());
    let pre = Rational::one()
        / (int(key.q as i64).pow_u(k) * Rational::from_integer(factorial(k) * factorial(b)));
    let mu_prod = key
        .mu
        .iter()
        .fold(Rational::one(), |a, &m| a * int(m as i64));
    let mut total = Rational::zero();
    for lambda in Partition::all_of_size(d as u32) {
        let chi_q = mn_character(&lambda, &rho_q).expect("sizes agree");
        if chi_q.is_zero() {
            continue;
        }
        let chi_mu = mn_character(&lambda, &rho_mu).expect("sizes agree");
        let f = f_eigenvalue(key.r + 1, &lambda) / int(key.r as i64 + 1);
        total += Rational::from_integer(chi_q * chi_mu) * f.pow_u(b);
    }
    total * pre / mu_prod
}

fn compose(p: &[u8], t: (u8, u8)) -> Vec<u8> {
    p.iter()
        .map(|&x| {
            if x == t.0 {
                t.1
            } else if x == t.1 {
                t.0
            } else {
                x
            }
        })
        .collect()
}

fn merge(blocks: &[u8], a: u8, b: u8) -> Vec<u8> {
    let (ba, bb) = (blocks[a as usize], blocks[b as usize]);
    let raw: Vec<u8> = blocks
        .iter()
        .map(|&x| if x == bb { ba } else { x })
        .collect();
    // canonical relabelling by first occurrence
    let mut map = HashMap::new();
    raw.iter()
        .map(|x| {
            let next = map.len() as u8;
            *map.entry(*x).or_insert(next)
        })
        .collect()
}

/// Simple Hurwitz numbers (`q = r = 1`) by counting transposition factorisations.
///
/// Fixes one `σ` of cycle type `μ` and counts `(τ_1..τ_b)` with `σ τ_1 ⋯ τ_b = 1`,
/// optionally requiring `⟨σ, τ_i⟩` transitive. The count for all `σ` with
/// labelled cycles is `d!/Πμ_i` times this, and the Hurwitz number divides by
/// `d!·b!`.
pub fn transposition_count_oracle(g: u32, mu: &[u32], connected: bool) -> Rational {
    let key = HurwitzKey::new(g, 1, 1, mu);
    let Some(b) = completed_cycle_count(&key) else {
        return Rational::zero();
    };
    let d = key.size() as u8;
    let mut sigma = vec![0u8; d as usize];
    let mut blocks = vec![0u8; d as usize];
    let mut start = 0u8;
    for (c, &m) in mu.iter().enumerate() {
        for i in 0..m as u8 {
            sigma[(start + i) as usize] = start + (i + 1) % m as u8;
            blocks[(start + i) as usize] = c as u8;
        }
        start += m as u8;
    }
    let transpositions: Vec<(u8, u8)> = (0..d)
        .flat_map(|a| (a + 1..d).map(move |b| (a, b)))
        .collect();
    let mut states: BTreeMap<(Vec<u8>, Vec<u8>), BigInt> = BTreeMap::new();
    states.insert((sigma, blocks), BigInt::one());
    for _ in 0..b {
        let mut next: BTreeMap<(Vec<u8>, Vec<u8>), BigInt> = BTreeMap::new();
        for ((perm, bl), c) in &states {
            for &t in &transpositions {
                let key = (compose(perm, t), merge(bl, t.0, t.1));
                *next.entry(key).or_insert_with(BigInt::zero) += c;
            }
        }
        states = next;
    }
    let identity: Vec<u8> = (0..d).collect();
    let count = states
        .iter()
        .filter(|((perm, bl), _)| *perm == identity && (!connected || bl.iter().all(|&x| x == 0)))
        .fold(BigInt::zero(), |acc, (_, c)| acc + c);
    let mu_prod = mu.iter().fold(BigInt::one(), |a, &m| a * BigInt::from(m));
    Rational::new(count, mu_prod * factorial(b))
}
