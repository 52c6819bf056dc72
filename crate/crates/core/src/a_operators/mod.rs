//! Conjugated α-operators isolating the polynomial part of Hurwitz numbers.
//!
//! A table entry at `(p, i)` stands for `u^p Σ_l c(l) E_{l + origin − q·i, l}`;
//! `origin` is `⟨μ⟩_q` for the operators themselves, so tables for different `μ`
//! with the same residue line up entry by entry.

mod symbolic;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{decompose, delta_q_power, pochhammer_inv, q_poly, UniPoly};
use crate::error::{Error, Result};
use crate::fock::half;
use crate::fock::{apply_band, BandOperator, FockVector, Partition};
use crate::hurwitz::disconnected_by_cycle_count;
use crate::report::{params, Item, Report};
use crate::scalar::{factorial, int, rational_string, Field, Rational};

pub use symbolic::{
    a_operator_symbolic, poles_within, residue_check, symbolic_correlator, SymbolicCorrelator,
};

#[derive(Clone, Debug, PartialEq)]
pub struct ATermTable<C> {
    pub q: u32,
    pub r: u32,
    /// `⟨μ⟩` modulo `qr`.
    pub residue: u32,
    /// Energy change of the offset-0 diagonal.
    pub origin: i64,
    pub entries: BTreeMap<(i64, i64), UniPoly<C>>,
    pub scalars: BTreeMap<i64, C>,
}

impl<C: Field> ATermTable<C> {
    fn empty(q: u32, r: u32, residue: u32, origin: i64) -> Self {
        ATermTable {
            q,
            r,
            residue,
            origin,
            entries: BTreeMap::new(),
            scalars: BTreeMap::new(),
        }
    }

    /// Energy change `e` of the diagonal `E_{l+e,l}` at offset `i`.
    pub fn energy_of(&self, i: i64) -> i64 {
        self.origin - self.q as i64 * i
    }

    /// Offset index of the diagonal `E_{l+e,l}`.
    pub fn offset_of(&self, e: i64) -> i64 {
        let d = self.origin - e;
        assert_eq!(
            d % self.q as i64,
            0,
            "energy {e} not on this table's lattice"
        );
        d / self.q as i64
    }

    fn add_entry(&mut self, p: i64, i: i64, c: UniPoly<C>) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry((p, i)).or_insert_with(UniPoly::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.entries.remove(&(p, i));
        }
    }

    fn add_scalar(&mut self, p: i64, c: C) {
        if c.is_zero() {
            return;
        }
        let slot = self.scalars.entry(p).or_insert_with(C::zero);
        *slot = slot.clone() + c;
    }

    /// Populated u-powers.
    pub fn u_powers(&self) -> Vec<i64> {
        let mut ps: Vec<i64> = self.entries.keys().map(|k| k.0).collect();
        ps.extend(self.scalars.keys().copied());
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    pub fn min_u_power(&self) -> Option<i64> {
        self.u_powers().first().copied()
    }

    pub fn offsets_at(&self, p: i64) -> Vec<i64> {
        self.entries
            .keys()
            .filter(|k| k.0 == p)
            .map(|k| k.1)
            .collect()
    }
}

fn powi(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        x.pow_u(e as u64)
    } else {
        Rational::one() / x.pow_u((-e) as u64)
    }
}

/// `e^{u^r ℱ_{r+1}/(r+1)} α_{−μ} e^{−u^r ℱ_{r+1}/(r+1)}` up to `u^{u_order}`.
pub fn conjugation_o(mu: u32, q: u32, r: u32, u_order: i64) -> ATermTable<Rational> {
    let split = decompose(mu as u64, q as u64);
    let qr = (q * r) as u64;
    let mut table = ATermTable::empty(q, r, (mu as u64 % qr) as u32, split.frac as i64);
    let qm = q_poly(mu as i64, r);
    let mut s = 0i64;
    while r as i64 * s <= u_order {
        let c = int(mu as i64).pow_u(s as u64) / Rational::from_integer(factorial(s as u64));
        table.add_entry(
            r as i64 * s,
            -(split.floor as i64),
            qm.pow(s as u32).scale(&c),
        );
        s += 1;
    }
    table
}

/// The operator `𝒜^{q,r}_{⟨μ⟩}(u, μ)` up to `u^{u_order}`, identity part included.
pub fn a_operator(mu: u32, q: u32, r: u32, u_order: i64) -> ATermTable<Rational> {
    assert!(mu >= 1 && q >= 1 && r >= 1);
    let qr = (q * r) as u64;
    let nu = (mu as u64 / qr) as i64;
    let split_q = decompose(mu as u64, q as u64);
    let mut table = ATermTable::empty(q, r, (mu as u64 % qr) as u32, split_q.frac as i64);
    let m = int(mu as i64);
    let qm = q_poly(mu as i64, r);
    let mut s = -nu;
    while r as i64 * s <= u_order {
        let p = r as i64 * s;
        let kappa = powi(&m, s - 1) * pochhammer_inv(nu, s);
        let n_pow = (s + nu) as u32;
        let qn = qm.pow(n_pow);
        let mut d = qn.clone();
        for t in 0..=(r * n_pow) as i64 {
            if t > 0 {
                d = delta_q_power(&d, q as u64, 1).scale(&(Rational::one() / int(q as i64 * t)));
            }
            if d.is_zero() {
                break;
            }
            table.add_entry(p, t - split_q.floor as i64, d.scale(&kappa));
        }
        if split_q.frac == 0 {
            let fq = split_q.floor;
            let dd = delta_q_power(&qn, q as u64, fq - 1);
            let norm = int(q as i64).pow_u(fq) * Rational::from_integer(factorial(fq));
            let mut acc = Rational::zero();
            for j in 1..=q as i64 {
                acc += dd.eval(&half(-j));
            }
            table.add_scalar(p, acc * kappa / norm);
        }
        s += 1;
    }
    table
}

/// `𝒜^{q,r}(u, λ)^{−1}` as an element of `End(V)[[u]]` up to `u^{u_order}`.
pub fn a_inverse(lambda: u32, q: u32, r: u32, u_order: i64) -> ATermTable<Rational> {
    assert!(lambda >= 1 && q >= 1 && r >= 1);
    let qr = (q * r) as u64;
    let nu = (lambda as u64 / qr) as i64;
    let origin = (-(lambda as i64)).rem_euclid(q as i64);
    let residue = ((qr - lambda as u64 % qr) % qr) as u32;
    let mut table = ATermTable::empty(q, r, residue, origin);
    let l = int(lambda as i64);
    let qt = -q_poly(-(lambda as i64), r);
    let mut s = 0i64;
    while r as i64 * (s + nu) <= u_order {
        let p = r as i64 * (s + nu);
        let c = l.pow_u((s + nu + 1) as u64)
            / Rational::from_integer(factorial(s as u64) * factorial(nu as u64));
        let mut d = qt.pow(s as u32);
        for t in 0..=r as i64 * s {
            if t > 0 {
                d = delta_q_power(&d, q as u64, 1).scale(&(Rational::one() / int(q as i64 * t)));
            }
            if d.is_zero() {
                break;
            }
            let e = -(lambda as i64) - q as i64 * t;
            let i = table.offset_of(e);
            table.add_entry(p, i, d.scale(&c));
        }
        s += 1;
    }
    table
}

/// Product `A·B` of the E-parts in the one-particle algebra `End(V)[[u]]`, keyed by
/// `(u-power, energy change)` and truncated at `u_order`.
pub fn compose_in_end_v(
    a: &ATermTable<Rational>,
    b: &ATermTable<Rational>,
    u_order: i64,
) -> BTreeMap<(i64, i64), UniPoly<Rational>> {
    let mut out: BTreeMap<(i64, i64), UniPoly<Rational>> = BTreeMap::new();
    for (&(pa, ia), g) in &a.entries {
        let ea = a.energy_of(ia);
        for (&(pb, ib), f) in &b.entries {
            if pa + pb > u_order {
                continue;
            }
            let eb = b.energy_of(ib);
            // (Σ g(l) E_{l+ea,l})(Σ f(k) E_{k+eb,k}) = Σ g(k+eb) f(k) E_{k+ea+eb,k}
            let prod = &g.shift(&int(eb)) * f;
            let slot = out.entry((pa + pb, ea + eb)).or_insert_with(UniPoly::zero);
            *slot = &*slot + &prod;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn apply_at_power(table: &ATermTable<Rational>, p: i64, v: &FockVector) -> Result<FockVector> {
    let mut out = match table.scalars.get(&p) {
        Some(c) => v.scale(c),
        None => FockVector::zero(v.cap()),
    };
    for ((_, i), c) in table.entries.range((p, i64::MIN)..=(p, i64::MAX)) {
        let op = BandOperator::new(-table.energy_of(*i), c.clone());
        out = out.add(&apply_band(&op, v)?);
    }
    Ok(out)
}

/// Apply `tables[0] ⋯ tables[k−1]` to the vacuum (rightmost first), keeping only
/// partial u-powers that can still reach a total of at most `target` once the
/// operators further left (each at least `left_min`) are added.
pub(crate) fn apply_chain(
    tables: &[ATermTable<Rational>],
    cap: u64,
    target: i64,
    left_min: i64,
) -> Result<BTreeMap<i64, FockVector>> {
    let mins: Vec<i64> = tables
        .iter()
        .map(|t| t.min_u_power().unwrap_or(0))
        .collect();
    let mut states: BTreeMap<i64, FockVector> = BTreeMap::new();
    states.insert(0, FockVector::vacuum(cap));
    for idx in (0..tables.len()).rev() {
        let rest: i64 = mins[..idx].iter().sum::<i64>() + left_min;
        let mut next: BTreeMap<i64, FockVector> = BTreeMap::new();
        for (&p0, v) in &states {
            for p in tables[idx].u_powers() {
                if p0 + p + rest > target {
                    continue;
                }
                let w = apply_at_power(&tables[idx], p, v)?;
                if w.is_zero() {
                    continue;
                }
                let slot = next.entry(p0 + p).or_insert_with(|| FockVector::zero(cap));
                *slot = slot.add(&w);
            }
        }
        states = next;
    }
    Ok(states)
}

fn floor_qr(mu: u32, q: u32, r: u32) -> i64 {
    (mu / (q * r)) as i64
}

/// `[u^{u_power}] ⟨Π_i 𝒜_{⟨μ_i⟩}(u, μ_i)⟩` by applying the term tables.
pub fn disconnected_a_correlator(mu: &[u32], q: u32, r: u32, u_power: i64) -> Result<Rational> {
    if mu.is_empty() || mu.contains(&0) || q == 0 || r == 0 {
        return Err(Error::InvalidInput(
            "profile entries, q and r must be positive".into(),
        ));
    }
    let mins: Vec<i64> = mu
        .iter()
        .map(|&m| -(r as i64) * floor_qr(m, q, r))
        .collect();
    let total_min: i64 = mins.iter().sum();
    if u_power < total_min {
        return Ok(Rational::zero());
    }
    let tables: Vec<ATermTable<Rational>> = mu
        .iter()
        .zip(&mins)
        .map(|(&m, &lo)| a_operator(m, q, r, u_power - (total_min - lo)))
        .collect();
    let cap = mu.iter().map(|&m| m as u64).sum();
    let states = apply_chain(&tables, cap, u_power, 0)?;
    Ok(states
        .get(&u_power)
        .map(|v| v.coeff(&Partition::empty()))
        .unwrap_or_else(Rational::zero))
}

/// Same coefficient from the Hurwitz numbers: `h^•_g / Π (μ_i^{[μ_i]}/[μ_i]!)`
/// with `r·b = u_power + r Σ [μ_i]`, including disconnected genera `g < 0`.
pub fn hurwitz_route_coefficient(mu: &[u32], q: u32, r: u32, u_power: i64) -> Rational {
    let floors: i64 = mu.iter().map(|&m| floor_qr(m, q, r)).sum();
    let rb = u_power + r as i64 * floors;
    if rb < 0 || rb % r as i64 != 0 {
        return Rational::zero();
    }
    let h = disconnected_by_cycle_count(q, r, mu, (rb / r as i64) as u64);
    let pref = mu.iter().fold(Rational::one(), |acc, &m| {
        let f = floor_qr(m, q, r) as u64;
        acc * int(m as i64).pow_u(f) / Rational::from_integer(factorial(f))
    });
    h / pref
}

/// Lowest u-power at which `⟨Π 𝒜⟩` can be nonzero.
pub fn lowest_u_power(mu: &[u32], q: u32, r: u32) -> i64 {
    -(r as i64) * mu.iter().map(|&m| floor_qr(m, q, r)).sum::<i64>()
}

/// Both routes to `⟨Π 𝒜⟩` for every u-power from the lowest up to `max_u`.
pub fn verify_hurw_aop(mu: &[u32], q: u32, r: u32, max_u: i64) -> Result<Report> {
    let mut items = Vec::new();
    for p in lowest_u_power(mu, q, r)..=max_u {
        let expected = hurwitz_route_coefficient(mu, q, r, p);
        let actual = disconnected_a_correlator(mu, q, r, p)?;
        items.push(Item::compare(
            format!("u^{p}"),
            rational_string(&expected),
            rational_string(&actual),
        ));
    }
    Ok(Report::new(
        "check hurw-aop",
        params([
            ("mu", format!("{mu:?}")),
            ("q", q.to_string()),
            ("r", r.to_string()),
            ("max_u", max_u.to_string()),
        ]),
        items,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{apply_alpha, apply_f};
    use crate::scalar::ratio;

    #[test]
    fn conjugation_low_orders() {
        for mu in 1..4u32 {
            let t = conjugation_o(mu, 1, 1, 3);
            assert_eq!(t.entries[&(0, -(mu as i64))], UniPoly::one());
            let expect = &UniPoly::linear(int(mu as i64)).pow(2) - &UniPoly::monomial(int(1), 2);
            assert_eq!(t.entries[&(1, -(mu as i64))], expect.scale(&ratio(1, 2)));
        }
    }

    /// `⟨α_1^μ e^{uℱ_2/2} α_{−μ} e^{−uℱ_2/2}⟩` with the exponentials truncated.
    #[test]
    fn conjugation_matches_exponential_series() {
        let order = 4i64;
        for mu in 1..=4u32 {
            let table = conjugation_o(mu, 1, 1, order);
            let cap = mu as u64;
            // e^{−uℱ₂/2}|0⟩ = |0⟩, so only the left exponential acts after α_{−μ}.
            let start = apply_alpha(-(mu as i64), &FockVector::vacuum(cap)).unwrap();
            let mut term = start.clone();
            for s in 0..=order {
                let pair = |v: &FockVector| {
                    let mut w = v.clone();
                    for _ in 0..mu {
                        w = apply_alpha(1, &w).unwrap();
                    }
                    w.coeff(&Partition::empty())
                };
                let lhs = pair(&term);
                let rhs = pair(&apply_at_power(&table, s, &FockVector::vacuum(cap)).unwrap());
                assert_eq!(lhs, rhs, "mu={mu} s={s}");
                term = apply_f(2, &term).scale(&ratio(1, 2 * (s + 1)));
            }
        }
    }

    #[test]
    fn a_operator_examples() {
        let t = a_operator(1, 1, 2, 0);
        assert_eq!(t.scalars.get(&0), Some(&int(1)));
        for mu in [1u32, 3, 5] {
            assert!(a_operator(mu, 2, 1, 4).scalars.is_empty());
        }
        for mu in 1..8u32 {
            let t = a_operator(mu, 1, 2, 4);
            assert!(t.min_u_power().unwrap() >= -2 * (mu as i64 / 2));
            for p in t.u_powers() {
                assert!(t.offsets_at(p).len() <= 64);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let t = a_inverse(3, 1, 1, 6);
        assert_eq!(t.min_u_power(), Some(3));
        let lead = &t.entries[&(3, t.offset_of(-3))];
        assert_eq!(lead, &UniPoly::constant(int(3) * int(3).pow_u(3) / int(6)));
    }

    #[test]
    fn inverse_composes_to_identity_on_v() {
        for (q, r) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            for mu in 1..=4u32 {
                let order = 4;
                let nu = floor_qr(mu, q, r);
                let a = a_operator(mu, q, r, order + r as i64 * nu);
                let b = a_inverse(mu, q, r, order + r as i64 * nu);
                for prod in [
                    compose_in_end_v(&a, &b, order),
                    compose_in_end_v(&b, &a, order),
                ] {
                    let mut expect = BTreeMap::new();
                    expect.insert((0, 0), UniPoly::one());
                    assert_eq!(prod, expect, "q={q} r={r} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn correlator_examples() {
        assert_eq!(
            disconnected_a_correlator(&[2], 1, 1, -1).unwrap(),
            ratio(1, 4)
        );
        assert_eq!(disconnected_a_correlator(&[1], 1, 2, 0).unwrap(), int(1));
        assert_eq!(disconnected_a_correlator(&[2], 1, 1, 0).unwrap(), int(0));
        assert!(verify_hurw_aop(&[1], 1, 1, 4).unwrap().passed());
    }

    #[test]
    fn corrupted_coefficient_is_caught() {
        let expected = hurwitz_route_coefficient(&[2, 1], 1, 1, 1);
        let actual = disconnected_a_correlator(&[2, 1], 1, 1, 1).unwrap();
        assert_eq!(expected, actual);
        let bad = Item::compare(
            "u^1",
            rational_string(&expected),
            rational_string(&(actual + int(1))),
        );
        assert!(!Report::new("self-test", BTreeMap::new(), vec![bad]).passed());
    }
}
