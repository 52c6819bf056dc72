//! The first A-operator with its floor `ν = [μ]` kept symbolic.
//!
//! For `μ = qrν + η` every coefficient is a rational function of `ν` assembled
//! from `diff_coeff` and `pochhammer_inv_symbolic`; only offsets `i ≥ 0` (the
//! non-raising diagonals) have a `ν`-independent description.

use num_traits::{One, Zero};

use super::{a_inverse, a_operator, apply_chain, ATermTable};
use crate::algebra::{
    binomial_poly, diff_coeff, pochhammer_inv_symbolic, residue_at, RationalFunction, UniPoly,
};
use crate::error::{Error, Result};
use crate::fock::{band_terms, half, Partition};
use crate::report::{params, Item, Report, Status};
use crate::scalar::{binomial, int, rational_string, Field, Rational};

type RF = RationalFunction;

/// Correlator as a function of `ν`, split into the contribution of the E-part of
/// the first operator and that of its identity part.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicCorrelator {
    pub e_part: RationalFunction,
    pub identity_part: RationalFunction,
}

impl SymbolicCorrelator {
    pub fn total(&self) -> RationalFunction {
        self.e_part.clone() + self.identity_part.clone()
    }
}

/// `μ(ν) = qrν + η`.
fn mu_poly(eta: u32, q: u32, r: u32) -> UniPoly<Rational> {
    UniPoly::new(vec![int(eta as i64), int((q * r) as i64)])
}

fn mu_power(eta: u32, q: u32, r: u32, e: i64) -> RF {
    let m = mu_poly(eta, q, r);
    if e >= 0 {
        RF::from_poly(m.pow(e as u32))
    } else {
        RF::new(UniPoly::one(), m.pow((-e) as u32))
    }
}

/// `e_{k,a} = [y^a] (Σ_{i=1}^r C(r+1,i+1)/(r+1) y^i)^k`.
fn e_coeff(r: u32, k: u32, a: u32) -> Rational {
    let base = UniPoly::new(
        (0..=r)
            .map(|i| {
                if i == 0 {
                    Rational::zero()
                } else {
                    Rational::from_integer(binomial(r as u64 + 1, i as u64 + 1)) / int(r as i64 + 1)
                }
            })
            .collect(),
    );
    base.pow(k).coeff(a as usize)
}

/// `[l^{r(ν+s)−a}] Q_μ^r(l)^{ν+s}` as a polynomial in `ν`.
fn q_power_coeff(eta: u32, q: u32, r: u32, s: i64, a: u32) -> UniPoly<Rational> {
    let mut acc = UniPoly::zero();
    for k in 0..=a {
        let e = e_coeff(r, k, a);
        if !e.is_zero() {
            acc = &acc + &binomial_poly(s, k as u64).scale(&e);
        }
    }
    &acc * &mu_poly(eta, q, r).pow(a)
}

/// Coefficients (by power of `l`) of `Δ_q^{rν+m}/(q^{rν+m}(rν+m)!) Q^{ν+s}` as
/// polynomials in `ν`.
fn difference_block(eta: u32, q: u32, r: u32, s: i64, m: i64) -> Vec<UniPoly<Rational>> {
    let top = r as i64 * s - m;
    if top < 0 {
        return Vec::new();
    }
    let scale_x = UniPoly::monomial(int(r as i64), 1);
    let mut out = vec![UniPoly::zero(); top as usize + 1];
    for a in 0..=top {
        let pa = q_power_coeff(eta, q, r, s, a as u32);
        if pa.is_zero() {
            continue;
        }
        let p = r as i64 * s - a;
        for (k, slot) in out.iter_mut().enumerate().take((p - m) as usize + 1) {
            let c = diff_coeff(p, m, k as i64, q as u64).compose(&scale_x);
            *slot = &*slot + &(&c * &pa);
        }
    }
    out
}

/// `𝒜_η(u, qrν + η)` with symbolic `ν`: E-part offsets `i ≥ 0` and the identity
/// part, for u-powers up to `u_order`.
pub fn a_operator_symbolic(eta: u32, q: u32, r: u32, u_order: i64) -> ATermTable<RationalFunction> {
    assert!(eta < q * r);
    let c = (eta / q) as i64;
    let origin = (eta % q) as i64;
    let mut table = ATermTable::empty(q, r, eta, origin);
    let mut s = 0i64;
    while r as i64 * s <= u_order {
        let kappa = mu_power(eta, q, r, s - 1) * pochhammer_inv_symbolic(s);
        for i in 0..=(r as i64 * s - c).max(-1) {
            let block = difference_block(eta, q, r, s, i + c);
            let coeffs: Vec<RF> = block
                .into_iter()
                .map(|p| RF::from_poly(p) * kappa.clone())
                .collect();
            table.add_entry(r as i64 * s, i, UniPoly::new(coeffs));
        }
        s += 1;
    }
    if origin == 0 {
        let mut s = -1i64;
        while r as i64 * s <= u_order {
            let kappa = mu_power(eta, q, r, s - 2) * pochhammer_inv_symbolic(s);
            let block = difference_block(eta, q, r, s, c - 1);
            let mut acc = UniPoly::zero();
            for j in 1..=q as i64 {
                let l = half(-j);
                for (k, p) in block.iter().enumerate() {
                    acc = &acc + &p.scale(&l.pow_u(k as u64));
                }
            }
            table.add_scalar(r as i64 * s, RF::from_poly(acc) * kappa);
            s += 1;
        }
    }
    table
}

/// The correlator `[u^{u_power}] ⟨𝒜_{η_1}(u, qrν+η_1) Π_{j≥2} 𝒜_{η_j}(u, μ_j)⟩`
/// as a rational function of `ν`.
pub fn symbolic_correlator(
    residues: &[u32],
    floors_rest: &[u64],
    q: u32,
    r: u32,
    u_power: i64,
) -> Result<SymbolicCorrelator> {
    let qr = q * r;
    if residues.is_empty() || residues.len() != floors_rest.len() + 1 {
        return Err(Error::InvalidInput(
            "need one residue per part and a floor for every part but the first".into(),
        ));
    }
    if residues.iter().any(|&e| e >= qr) {
        return Err(Error::Inadmissible(format!(
            "residues {residues:?} must lie in [0, {qr})"
        )));
    }
    if residues.iter().map(|&e| e as u64).sum::<u64>() % q as u64 != 0 {
        return Err(Error::Inadmissible(format!(
            "q = {q} does not divide the residue sum of {residues:?}"
        )));
    }
    let rest: Vec<u32> = floors_rest
        .iter()
        .zip(&residues[1..])
        .map(|(&f, &e)| (qr as u64 * f + e as u64) as u32)
        .collect();
    if rest.contains(&0) {
        return Err(Error::Inadmissible(
            "every μ_j with j ≥ 2 must be positive".into(),
        ));
    }
    let rest_min: i64 = rest.iter().map(|&m| -(r as i64) * (m / qr) as i64).sum();
    let first_min = -(r as i64);
    let tables: Vec<ATermTable<Rational>> = rest
        .iter()
        .map(|&m| {
            let own = -(r as i64) * (m / qr) as i64;
            a_operator(m, q, r, u_power - first_min - (rest_min - own))
        })
        .collect();
    let cap = rest.iter().map(|&m| m as u64).sum();
    let states = apply_chain(&tables, cap, u_power, first_min)?;
    let first = a_operator_symbolic(residues[0], q, r, u_power - rest_min);

    let mut e_part = RF::zero();
    let mut identity_part = RF::zero();
    for (&p_rest, v) in &states {
        let p = u_power - p_rest;
        if let Some(c) = first.scalars.get(&p) {
            let vac = v.coeff(&Partition::empty());
            if !vac.is_zero() {
                identity_part = identity_part + c.clone() * RF::constant(vac);
            }
        }
        for (lambda, coeff) in v.terms() {
            let size = lambda.size() as i64;
            let d = first.origin + size;
            if d % q as i64 != 0 {
                continue;
            }
            let Some(poly) = first.entries.get(&(p, d / q as i64)) else {
                continue;
            };
            for (l, sign, result) in band_terms(size, lambda) {
                if !result.is_empty() {
                    continue;
                }
                let x = half(l);
                let mut val = RF::zero();
                for (k, ck) in poly.coeffs().iter().enumerate() {
                    val = val + ck.clone() * RF::constant(x.pow_u(k as u64));
                }
                let w = if sign < 0 {
                    -coeff.clone()
                } else {
                    coeff.clone()
                };
                e_part = e_part + val * RF::constant(w);
            }
        }
    }
    Ok(SymbolicCorrelator {
        e_part,
        identity_part,
    })
}

/// Whether every pole of `f` lies in `allowed`.
pub fn poles_within(f: &RationalFunction, allowed: &[Rational]) -> bool {
    let mut d = f.denominator().clone();
    for a in allowed {
        let lin = UniPoly::linear(-a.clone());
        loop {
            let (quot, rem) = d.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            d = quot;
        }
    }
    d.degree() == Some(0)
}

fn poly_string(coeffs: &[Rational]) -> String {
    let parts: Vec<String> = coeffs.iter().map(rational_string).collect();
    format!("[{}]", parts.join(", "))
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Coefficient-wise check that the residue at `ν = −m` of the symbolic operator
/// equals the rescaled inverse operator with argument `mqr − η`.
pub fn residue_check(eta: u32, m: u32, q: u32, r: u32, max_u: i64) -> Result<Report> {
    let qr = q * r;
    if eta >= qr || m == 0 || max_u < 0 {
        return Err(Error::InvalidInput(format!(
            "need 0 ≤ η < qr, m ≥ 1 and max_u ≥ 0 (η = {eta}, m = {m}, max_u = {max_u})"
        )));
    }
    let order = r as i64 * (m as i64 + max_u);
    let sym = a_operator_symbolic(eta, q, r, order);
    let lambda = m * qr - eta;
    let inv = a_inverse(lambda, q, r, order);
    let (constant, shift) = if eta != 0 {
        (Rational::one() / int(lambda as i64), r as i64)
    } else {
        (Rational::one() / int((m * q * q * r * r) as i64), 0)
    };
    let pole = int(-(m as i64));

    // Both tables sit on the lattice origin η mod q, so offsets agree.
    debug_assert_eq!(sym.origin, inv.origin);
    let mut keys: Vec<(i64, i64)> = sym.entries.keys().copied().collect();
    keys.extend(
        inv.entries
            .keys()
            .map(|&(p, i)| (p + shift, i))
            .filter(|k| k.0 <= order),
    );
    keys.sort_unstable();
    keys.dedup();

    let mut items = Vec::new();
    for (p, i) in keys {
        let key = format!("u^{p} i={i}");
        let expected: Vec<Rational> = inv
            .entries
            .get(&(p - shift, i))
            .map(|c| c.coeffs().iter().map(|x| x * &constant).collect())
            .unwrap_or_default();
        let residues: Result<Vec<Rational>> = sym
            .entries
            .get(&(p, i))
            .map(|c| c.coeffs().iter().map(|f| residue_at(f, &pole)).collect())
            .unwrap_or_else(|| Ok(Vec::new()));
        match residues {
            Ok(res) => items.push(Item::compare(
                key,
                poly_string(&trim(expected)),
                poly_string(&trim(res)),
            )),
            Err(e) => items.push(Item::new(
                key,
                poly_string(&expected),
                e.to_string(),
                Status::Fail,
            )),
        }
    }
    for (&p, c) in &sym.scalars {
        let key = format!("u^{p} identity");
        match residue_at(c, &pole) {
            Ok(v) => items.push(Item::compare(key, "0".into(), rational_string(&v))),
            Err(e) => items.push(Item::new(key, "0", e.to_string(), Status::Fail)),
        }
    }
    Ok(Report::new(
        "check residue",
        params([
            ("eta", eta.to_string()),
            ("m", m.to_string()),
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
    use crate::a_operators::disconnected_a_correlator;

    #[test]
    fn single_pole_example() {
        // n = 1, q = r = 1, η = 0 at u^0: only s = 0 contributes through the
        // identity part, giving 1/μ^2 = 1/ν^2 paired with the vacuum.
        let c = symbolic_correlator(&[0], &[], 1, 1, 0).unwrap();
        for nu in 1..6 {
            let v = c.total().eval(&int(nu)).unwrap();
            assert_eq!(v, disconnected_a_correlator(&[nu as u32], 1, 1, 0).unwrap());
        }
        assert!(c.e_part.has_simple_poles());
    }

    #[test]
    fn point_evaluation() {
        let cases: [(&[u32], &[u64], u32, u32, i64); 5] = [
            (&[0, 0], &[1], 1, 1, 1),
            (&[1], &[], 1, 2, 2),
            (&[1, 1], &[0], 2, 1, 1),
            (&[0, 1], &[1], 1, 2, 0),
            (&[1, 1], &[1], 1, 2, 2),
        ];
        for (res, floors, q, r, p) in cases {
            let c = symbolic_correlator(res, floors, q, r, p).unwrap();
            let qr = q * r;
            let mut allowed: Vec<Rational> = (1..=12).map(|k| int(-k)).collect();
            allowed.push(Rational::new((-(res[0] as i64)).into(), (qr as i64).into()));
            assert!(c.e_part.has_simple_poles(), "{res:?}");
            assert!(poles_within(&c.total(), &allowed));
            for nu in 0..=5u32 {
                let mu1 = qr * nu + res[0];
                if mu1 == 0 {
                    continue;
                }
                let mut mu = vec![mu1];
                mu.extend(
                    floors
                        .iter()
                        .zip(&res[1..])
                        .map(|(&f, &e)| qr * f as u32 + e),
                );
                let direct = disconnected_a_correlator(&mu, q, r, p).unwrap();
                assert_eq!(
                    c.total().eval(&int(nu as i64)).unwrap(),
                    direct,
                    "{res:?} nu={nu}"
                );
            }
        }
    }

    #[test]
    fn inadmissible_residues() {
        assert!(matches!(
            symbolic_correlator(&[1], &[], 2, 1, 0),
            Err(Error::Inadmissible(_))
        ));
        assert!(matches!(
            symbolic_correlator(&[4], &[], 2, 1, 0),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn residue_report_is_not_vacuous() {
        let rep = residue_check(1, 2, 2, 2, 2).unwrap();
        let nonzero = rep
            .items
            .iter()
            .filter(|i| i.expected != "[]" && i.expected != "0")
            .count();
        assert!(nonzero >= 6, "{rep:?}");
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn residue_examples() {
        assert!(residue_check(0, 1, 1, 1, 3).unwrap().passed());
        assert!(residue_check(1, 1, 2, 1, 3).unwrap().passed());
        let f = RF::new(UniPoly::one(), UniPoly::linear(int(1)));
        assert_eq!(
            residue_at(&f, &Rational::new(1.into(), 2.into())).unwrap(),
            int(0)
        );
    }
}
