//! The unstable sectors `(0,1)` and `(0,2)`: closed forms against the engine,
//! and the series identities on the curve `X = z·exp(−z^{qr})`.

use num_traits::{One, Zero};

use crate::algebra::Series;
use crate::error::{Error, Result};
use crate::hurwitz::{connected_hurwitz, HurwitzKey};
use crate::report::{params, Item, Report};
use crate::scalar::{factorial, int, rational_string, Field, Rational};
use crate::XSeries;

fn inv_factorial(n: u64) -> Rational {
    Rational::one() / Rational::from_integer(factorial(n))
}

fn int_pow(base: i64, e: i64) -> Rational {
    let b = int(base).pow_u(e.unsigned_abs());
    if e < 0 {
        Rational::one() / b
    } else {
        b
    }
}

/// `μ^{[μ]}/[μ]!` with `[μ] = ⌊μ/qr⌋`.
pub fn floor_prefactor(mu: u64, qr: u64) -> Rational {
    let f = mu / qr;
    int(mu as i64).pow_u(f) * inv_factorial(f)
}

/// Coefficient of `e^{x(nr+1)q}` in `F_{0,1}`: `q·(q(nr+1))^{n−2}/n!`.
pub fn f01_coefficient(q: u32, r: u32, n: u64) -> Rational {
    let base = q as i64 * (n as i64 * r as i64 + 1);
    int(q as i64) * int_pow(base, n as i64 - 2) * inv_factorial(n)
}

pub fn f01_check(q: u32, r: u32, max_n: u64) -> Report {
    let mut items = Vec::new();
    let top = q as u64 * (max_n * r as u64 + 1);
    let z = z_series(q, r, top as i64);
    let zq = z.pow(q);
    for mu in 1..=top {
        let engine = connected_hurwitz(&HurwitzKey::new(0, q, r, &[mu as u32]));
        let on_curve = mu % q as u64 == 0 && (mu / q as u64 - 1).is_multiple_of(r as u64);
        if on_curve {
            let n = (mu / q as u64 - 1) / r as u64;
            let closed = f01_coefficient(q, r, n);
            items.push(Item::compare(
                format!("n={n} mu={mu}"),
                rational_string(&closed),
                rational_string(&engine),
            ));
            // coefficient of X^μ in y = z^q against μ·F01
            items.push(Item::compare(
                format!("n={n} y-route"),
                rational_string(&(int(mu as i64) * &closed)),
                rational_string(&zq.coeff(mu as i64)),
            ));
        } else {
            items.push(Item::compare(
                format!("mu={mu} off-curve"),
                "0".into(),
                rational_string(&engine),
            ));
        }
    }
    Report::new(
        "check f01",
        params([
            ("q", q.to_string()),
            ("r", r.to_string()),
            ("max_n", max_n.to_string()),
        ]),
        items,
    )
}

/// Coefficient of `X_1^{μ1} X_2^{μ2}` in `F_{0,2}`.
pub fn f02_coefficient(q: u32, r: u32, mu1: u64, mu2: u64) -> Rational {
    let qr = (q * r) as u64;
    if !(mu1 + mu2).is_multiple_of(qr) {
        return Rational::zero();
    }
    let pref = floor_prefactor(mu1, qr) * floor_prefactor(mu2, qr) / int((mu1 + mu2) as i64);
    if mu1.is_multiple_of(qr) {
        pref
    } else {
        pref * int(qr as i64)
    }
}

pub fn f02_check(q: u32, r: u32, max_total: u64) -> Report {
    let mut items = Vec::new();
    for total in 2..=max_total {
        for mu1 in 1..total {
            let mu2 = total - mu1;
            let engine = connected_hurwitz(&HurwitzKey::new(0, q, r, &[mu1 as u32, mu2 as u32]));
            items.push(Item::compare(
                format!("mu=({mu1},{mu2})"),
                rational_string(&f02_coefficient(q, r, mu1, mu2)),
                rational_string(&engine),
            ));
        }
    }
    Report::new(
        "check f02",
        params([
            ("q", q.to_string()),
            ("r", r.to_string()),
            ("max_total", max_total.to_string()),
        ]),
        items,
    )
}

/// `z(X) = Σ_{m≥0} (mqr+1)^{m−1} X^{mqr+1}/m!`, known through `X^order`.
pub fn z_series(q: u32, r: u32, order: i64) -> XSeries {
    let qr = (q * r) as i64;
    let mut coeffs = vec![Rational::zero(); order.max(0) as usize + 1];
    let mut m = 0i64;
    while m * qr < order {
        let e = m * qr + 1;
        coeffs[e as usize] = int_pow(e, m - 1) * inv_factorial(m as u64);
        m += 1;
    }
    Series::new(0, coeffs, order + 1)
}

/// `z·exp(−z^{qr}) − X`, which must vanish through `X^order`.
pub fn z_functional_residual(q: u32, r: u32, order: i64) -> XSeries {
    let z = z_series(q, r, order);
    let lhs = &z * &(-&z.pow(q * r)).exp();
    &lhs - &Series::var(order + 1)
}

pub fn z_series_check(q: u32, r: u32, order: i64) -> Report {
    let z = z_series(q, r, order);
    let residual = z_functional_residual(q, r, order);
    let qr = (q * r) as i64;
    // Lagrange inversion oracle: revert X·exp(−X^{qr}) directly
    let x = Series::<Rational>::var(order + 1);
    let reverted = (&x * &(-&x.pow(q * r)).exp()).revert();
    let mut items = Vec::new();
    for k in 0..=order {
        items.push(Item::compare(
            format!("X^{k} functional equation"),
            "0".into(),
            rational_string(&residual.coeff(k)),
        ));
        items.push(Item::compare(
            format!("X^{k} reversion"),
            rational_string(&reverted.coeff(k)),
            rational_string(&z.coeff(k)),
        ));
        if k % qr != 1 % qr {
            items.push(Item::compare(
                format!("X^{k} symmetry"),
                "0".into(),
                rational_string(&z.coeff(k)),
            ));
        }
    }
    Report::new(
        "check z-series",
        params([
            ("q", q.to_string()),
            ("r", r.to_string()),
            ("order", order.to_string()),
        ]),
        items,
    )
}

/// `X d/dX (z^i/i) = Σ_{μ ≡ i (qr)} μ^{[μ]}/[μ]! X^μ` for `1 ≤ i < qr`, and the
/// same with `z^{qr}` undivided for `i = qr`.
pub fn dz_power_identity_check(q: u32, r: u32, i: u32, order: i64) -> Result<Report> {
    let qr = q * r;
    if i == 0 || i > qr {
        return Err(Error::InvalidInput(format!("i = {i} outside [1, {qr}]")));
    }
    let z = z_series(q, r, order);
    let mut zi = z.pow(i);
    if i < qr {
        zi = zi.scale(&(Rational::one() / int(i as i64)));
    }
    let lhs = zi.derivative().shift(1);
    let mut items = Vec::new();
    for mu in 1..=order {
        let rhs = if mu as u64 % qr as u64 == i as u64 % qr as u64 {
            floor_prefactor(mu as u64, qr as u64)
        } else {
            Rational::zero()
        };
        items.push(Item::compare(
            format!("X^{mu}"),
            rational_string(&rhs),
            rational_string(&lhs.coeff(mu)),
        ));
    }
    Ok(Report::new(
        "check dz-power",
        params([
            ("q", q.to_string()),
            ("r", r.to_string()),
            ("i", i.to_string()),
            ("order", order.to_string()),
        ]),
        items,
    ))
}

/// Bivariate series truncated to `X_1^a X_2^b` with `a, b ≤ n`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct BoxSeries<T> {
    pub(crate) n: usize,
    pub(crate) c: Vec<Vec<T>>,
}

impl<T: Field> BoxSeries<T> {
    pub(crate) fn zero(n: usize) -> Self {
        BoxSeries {
            n,
            c: vec![vec![T::zero(); n + 1]; n + 1],
        }
    }

    /// `(z(X_1) − z(X_2))/(X_1 − X_2) − 1` for `z = X + O(X^2)` known through `X^{2n+1}`.
    pub(crate) fn divided_difference(z: &Series<T>, n: usize) -> Self {
        let mut w = Self::zero(n);
        for k in 2..=2 * n + 1 {
            let ck = z.coeff(k as i64);
            if ck.is_zero() {
                continue;
            }
            for a in 0..k {
                let b = k - 1 - a;
                if a <= n && b <= n {
                    w.c[a][b] = w.c[a][b].clone() + ck.clone();
                }
            }
        }
        w
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for a in 0..=self.n {
            for b in 0..=self.n {
                if self.c[a][b].is_zero() {
                    continue;
                }
                for c in 0..=self.n - a {
                    for d in 0..=self.n - b {
                        if !other.c[c][d].is_zero() {
                            out.c[a + c][b + d] = out.c[a + c][b + d].clone()
                                + self.c[a][b].clone() * other.c[c][d].clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// `log(1 + self)` for `self` without constant term.
    pub(crate) fn log1p(&self) -> Self {
        let mut out = Self::zero(self.n);
        let mut power = self.clone();
        for k in 1..=2 * self.n {
            let mut c = T::one() / T::from_i64(k as i64);
            if k % 2 == 0 {
                c = -c;
            }
            for a in 0..=self.n {
                for b in 0..=self.n {
                    out.c[a][b] = out.c[a][b].clone() + c.clone() * power.c[a][b].clone();
                }
            }
            power = power.mul(self);
        }
        out
    }
}

/// `X_1 X_2 ∂_1 ∂_2 log((z_1 − z_2)/(X_1 − X_2))` against
/// `Σ μ_1 μ_2 F02(μ_1, μ_2) X_1^{μ_1} X_2^{μ_2}`, exponents up to `order`.
pub fn bergman_check(q: u32, r: u32, order: usize) -> Result<Report> {
    if order < 2 {
        return Err(Error::InvalidInput("bergman check needs order ≥ 2".into()));
    }
    let n = order;
    let z = z_series(q, r, 2 * n as i64 + 1);
    let w = BoxSeries::divided_difference(&z, n);
    let log = w.log1p();
    let mut items = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            let lhs = &log.c[a][b] * int((a * b) as i64);
            let rhs = int((a * b) as i64) * f02_coefficient(q, r, a as u64, b as u64);
            items.push(Item::compare(
                format!("X1^{a} X2^{b}"),
                rational_string(&rhs),
                rational_string(&lhs),
            ));
        }
    }
    Ok(Report::new(
        "check bergman",
        params([
            ("q", q.to_string()),
            ("r", r.to_string()),
            ("order", order.to_string()),
        ]),
        items,
    ))
}
