//! Numerical topological recursion on `x = log z − z^{qr}`, `y = z^q`,
//! `B = dz_1 dz_2/(z_1 − z_2)^2`.
//!
//! Every stable `ω_{g,n}` is stored in the basis `dz/(z − a_j)^{m+1}`, `m ≥ 1`,
//! of principal parts at the branch points. Residues are taken on ζ-series
//! with `x = x(a_j) + ζ²`; the result is compared with the exact engine by
//! expanding the basis in `X = z·exp(−z^{qr})`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::Series;
use crate::error::{Error, Result};
use crate::hurwitz::{connected_hurwitz, HurwitzKey};
use crate::mp::{self, MpComplex};
use crate::report::{params, Item, Report, Status};
use crate::scalar::{int, ratio, rational_string, ComplexField, Field, Rational};
use crate::unstable::{f01_coefficient, f02_coefficient, z_series, BoxSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveData {
    pub q: u32,
    pub r: u32,
    /// Working precision in bits.
    pub prec: u32,
}

impl CurveData {
    pub fn new(q: u32, r: u32, prec: u32) -> Result<Self> {
        if q == 0 || r == 0 {
            return Err(Error::InvalidInput("q and r must be positive".into()));
        }
        if prec < 128 {
            return Err(Error::InvalidInput(format!(
                "precision {prec} below 128 bits"
            )));
        }
        Ok(CurveData { q, r, prec })
    }

    pub fn qr(&self) -> u32 {
        self.q * self.r
    }

    /// Proven regime: `r = 1`.
    pub fn proven(&self) -> bool {
        self.r == 1
    }

    /// `2^{−prec/2}`.
    pub fn tolerance(&self) -> f64 {
        (-(self.prec as f64) / 2.0).exp2()
    }
}

/// Zeros of `dx`: `a_j = (qr)^{−1/qr} e^{2πij/qr}`.
pub fn branch_points<C: ComplexField>(q: u32, r: u32) -> Vec<C> {
    let qr = q * r;
    let radius = C::real_root(&ratio(1, qr as i64), qr);
    (0..qr)
        .map(|j| radius.clone() * C::root_of_unity(j, qr))
        .collect()
}

fn inversion_memo() -> &'static Mutex<HashMap<(u32, usize), Series<Rational>>> {
    static MEMO: OnceLock<Mutex<HashMap<(u32, usize), Series<Rational>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `T(τ)` with `z = a(1 + T)` and `x(z) − x(a) = −(qr/2)τ²`, exact through `τ^order`.
///
/// Independent of the branch point since `a^{qr} = 1/qr`.
fn local_inversion(qr: u32, order: usize) -> Series<Rational> {
    if let Some(s) = inversion_memo().lock().expect("memo").get(&(qr, order)) {
        return s.clone();
    }
    let p = order as i64 + 3;
    let mut f = vec![Rational::zero(); p as usize];
    let mut binom = Rational::one();
    for k in 1..p {
        let kk = k;
        let log_term = ratio(if k % 2 == 1 { 1 } else { -1 }, kk);
        binom = binom * int(qr as i64 - kk + 1) / int(kk);
        f[k as usize] = log_term - &binom / int(qr as i64);
    }
    let f = Series::new(0, f, p);
    let u = f.normalize().shift(-2).scale(&ratio(-2, qr as i64));
    let tau = u.sqrt_unit().shift(1);
    let t = tau.revert().truncate(order as i64 + 1);
    inversion_memo()
        .lock()
        .expect("memo")
        .insert((qr, order), t.clone());
    t
}

/// Local theory at one branch point, all series in ζ.
#[derive(Clone, Debug)]
pub struct BranchPointLocal<C> {
    pub index: usize,
    pub center: C,
    pub order: usize,
    /// `z(ζ) − a`.
    pub z_minus_a: Series<C>,
    /// `z(ζ)`.
    pub z: Series<C>,
    /// `σ(ζ) = z(−ζ)`.
    pub sigma: Series<C>,
    /// `y(z(ζ)) = z(ζ)^q`.
    pub y: Series<C>,
    /// Largest coefficient of `x(z(ζ)) − x(a) − ζ²` through `ζ^order`.
    pub backsubstitution_residual: f64,
}

pub fn local_data<C: ComplexField>(
    curve: &CurveData,
    j: usize,
    order: usize,
) -> Result<BranchPointLocal<C>> {
    if order < 2 {
        return Err(Error::InvalidInput("local order must be at least 2".into()));
    }
    let qr = curve.qr();
    let a = branch_points::<C>(curve.q, curve.r)
        .into_iter()
        .nth(j)
        .ok_or_else(|| Error::InvalidInput(format!("branch point {j} out of range")))?;
    let t = local_inversion(qr, order);
    // ζ = cτ with c² = −qr/2
    let c = C::root_of_unity(1, 4) * C::real_root(&ratio(qr as i64, 2), 2);
    let cinv = C::one() / c;
    let prec = order as i64 + 1;
    let t_zeta: Vec<C> = (0..prec)
        .map(|k| C::from_rational(&t.coeff(k)) * cinv.pow_u(k as u64))
        .collect();
    let t_zeta = Series::new(0, t_zeta, prec);
    let z_minus_a = t_zeta.scale(&a);
    let z = &z_minus_a + &Series::new(0, vec![a.clone()], prec);
    let sigma = z.reflect();
    let y = z.pow(curve.q);

    let log1p: Vec<C> = (0..prec)
        .map(|k| {
            if k == 0 {
                C::zero()
            } else {
                let s = C::one() / C::from_i64(k);
                if k % 2 == 1 {
                    s
                } else {
                    -s
                }
            }
        })
        .collect();
    let one_plus_t = &Series::one(prec) + &t_zeta;
    let x_shift = &Series::new(0, log1p, prec).compose(&t_zeta)
        - &(&one_plus_t.pow(qr) - &Series::one(prec)).scale(&(C::one() / C::from_i64(qr as i64)));
    let residual_series = &x_shift - &Series::new(2, vec![C::one()], prec);
    let backsubstitution_residual = (0..prec)
        .map(|k| residual_series.coeff(k).modulus())
        .fold(0.0, f64::max);
    Ok(BranchPointLocal {
        index: j,
        center: a,
        order,
        z_minus_a,
        z,
        sigma,
        y,
        backsubstitution_residual,
    })
}

/// Basis element `dz/(z − a_j)^{m+1}` in one variable.
pub type BasisIndex = (usize, u32);

/// `ω_{g,n} = Σ c · Π_i dz_i/(z_i − a_{j_i})^{m_i+1}`.
#[derive(Clone, Debug)]
pub struct Omega<C> {
    pub g: u32,
    pub n: usize,
    pub terms: BTreeMap<Vec<BasisIndex>, C>,
}

impl<C: ComplexField> Omega<C> {
    /// Highest pole order `m + 1` over all terms.
    pub fn max_pole_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|&(_, m)| m + 1))
            .max()
            .unwrap_or(0)
    }

    /// Largest `|c_key − c_{swap(key)}|` over transpositions of two slots,
    /// relative to the largest coefficient.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self
            .terms
            .values()
            .map(|c| c.modulus())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for (key, c) in &self.terms {
            for i in 0..self.n {
                for j in i + 1..self.n {
                    let mut other = key.clone();
                    other.swap(i, j);
                    let d = match self.terms.get(&other) {
                        Some(o) => (c.clone() - o.clone()).modulus(),
                        None => c.modulus(),
                    };
                    worst = worst.max(d / scale);
                }
            }
        }
        worst
    }

    /// Largest relative coefficient difference to another representation.
    pub fn distance(&self, other: &Self) -> f64 {
        let scale = self
            .terms
            .values()
            .map(|c| c.modulus())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut keys: Vec<&Vec<BasisIndex>> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.into_iter()
            .map(|k| {
                let a = self.terms.get(k).cloned().unwrap_or_else(C::zero);
                let b = other.terms.get(k).cloned().unwrap_or_else(C::zero);
                (a - b).modulus() / scale
            })
            .fold(0.0, f64::max)
    }
}

type Factor<C> = BTreeMap<Vec<BasisIndex>, Series<C>>;

fn add_into<C: ComplexField>(map: &mut Factor<C>, key: Vec<BasisIndex>, s: Series<C>) {
    match map.remove(&key) {
        Some(old) => {
            map.insert(key, &old + &s);
        }
        None => {
            map.insert(key, s);
        }
    }
}

/// Recursion state: local data at every branch point and the computed `ω`.
pub struct TrEngine<C> {
    pub curve: CurveData,
    pub order: usize,
    locals: Vec<BranchPointLocal<C>>,
    centers: Vec<C>,
    /// Order in which branch-point residues are summed.
    branch_order: Vec<usize>,
    kernels: Vec<Vec<Series<C>>>,
    xi: HashMap<(usize, usize, u32), (Series<C>, Series<C>)>,
    omegas: HashMap<(u32, usize), Omega<C>>,
}

impl<C: ComplexField> TrEngine<C> {
    pub fn new(curve: CurveData, order: usize) -> Result<Self> {
        let qr = curve.qr() as usize;
        let locals = (0..qr)
            .map(|j| local_data::<C>(&curve, j, order))
            .collect::<Result<Vec<_>>>()?;
        let centers = branch_points::<C>(curve.q, curve.r);
        Ok(TrEngine {
            curve,
            order,
            locals,
            centers,
            branch_order: (0..qr).collect(),
            kernels: vec![Vec::new(); qr],
            xi: HashMap::new(),
            omegas: HashMap::new(),
        })
    }

    /// Sum branch-point residues in the given order instead.
    pub fn with_branch_order(mut self, order: Vec<usize>) -> Self {
        self.branch_order = order;
        self
    }

    pub fn locals(&self) -> &[BranchPointLocal<C>] {
        &self.locals
    }

    /// `κ_k(ζ)` with `K(z_0, z) = Σ_k dz_0/(z_0 − a)^{k+1} · κ_k(ζ)/dζ`.
    fn kernel(&mut self, la: usize, k: usize) -> Series<C> {
        while self.kernels[la].len() <= k {
            let kk = self.kernels[la].len();
            let loc = &self.locals[la];
            let s = if kk == 0 {
                Series::zero(loc.order as i64 + 1)
            } else {
                let num = &loc.z_minus_a.pow(kk as u32) - &loc.z_minus_a.reflect().pow(kk as u32);
                let dy = (&loc.y - &loc.y.reflect()).normalize();
                let den = dy.shift(1).scale(&C::from_i64(4));
                &num * &den.inv()
            };
            self.kernels[la].push(s);
        }
        self.kernels[la][k].clone()
    }

    /// `dz/(z − a_b)^{m+1}` at `z = z(ζ)` near branch point `la`, and at `σ(z)`.
    fn xi(&mut self, la: usize, b: usize, m: u32) -> (Series<C>, Series<C>) {
        if let Some(v) = self.xi.get(&(la, b, m)) {
            return v.clone();
        }
        let loc = &self.locals[la];
        let base = if b == la {
            loc.z_minus_a.normalize()
        } else {
            &loc.z - &Series::new(0, vec![self.centers[b].clone()], EXACT_LOCAL)
        };
        let own = &loc.z.derivative() * &base.inv().pow(m + 1);
        let sig = -&own.reflect();
        self.xi.insert((la, b, m), (own.clone(), sig.clone()));
        (own, sig)
    }

    /// `B(z, w)` for `z` near branch point `la`, as a series in ζ per basis
    /// element `dw/(w − a)^{k+2}`.
    fn bergman_free(&mut self, la: usize, sigma: bool, kmax: u32) -> Factor<C> {
        let loc = &self.locals[la];
        let dz = loc.z.derivative();
        let mut out = Factor::new();
        let mut power = Series::one(loc.order as i64 + 1);
        for k in 0..=kmax {
            let s = (&power * &dz).scale(&C::from_i64(k as i64 + 1));
            let s = if sigma { -&s.reflect() } else { s };
            out.insert(vec![(la, k + 1)], s);
            power = &power * &loc.z_minus_a;
        }
        out
    }

    /// `B(z, σ(z))` as a series in ζ.
    fn bergman_deck(&self, la: usize) -> Series<C> {
        let loc = &self.locals[la];
        let dz = loc.z.derivative();
        let dsigma = -&dz.reflect();
        let diff = (&loc.z - &loc.sigma).normalize();
        &(&dz * &dsigma) * &(&diff * &diff).inv()
    }

    /// `ω(z, z_J)` (or `ω(σ(z), z_J)`) near `la` as series per key of `z_J`.
    fn stable_factor(&mut self, la: usize, om: &Omega<C>, sigma: bool) -> Factor<C> {
        let mut out = Factor::new();
        for (key, c) in &om.terms {
            let (own, sig) = self.xi(la, key[0].0, key[0].1);
            let s = if sigma { sig } else { own };
            add_into(&mut out, key[1..].to_vec(), s.scale(c));
        }
        out
    }

    fn pole_bound(&self) -> u32 {
        self.omegas
            .values()
            .map(|o| o.max_pole_order())
            .max()
            .unwrap_or(0)
            + 4
    }

    /// `ω_{g,n}` for `2g − 2 + n > 0`, `n ≥ 1`.
    pub fn omega(&mut self, g: u32, n: usize) -> Result<Omega<C>> {
        if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
            return Err(Error::InvalidInput(format!(
                "(g, n) = ({g}, {n}) is not stable"
            )));
        }
        if let Some(o) = self.omegas.get(&(g, n)) {
            return Ok(o.clone());
        }
        // lower terms first so that pole bounds are known
        if g >= 1 && !(g == 1 && n == 1) {
            self.omega(g - 1, n + 1)?;
        }
        for g1 in 0..=g {
            for k in 0..n {
                let size = k + 1;
                if 2 * g1 as i64 - 2 + size as i64 > 0 && (g1, size) != (g, n) {
                    self.omega(g1, size)?;
                }
            }
        }
        let rest = n - 1;
        let mut result: BTreeMap<Vec<BasisIndex>, C> = BTreeMap::new();
        for la in self.branch_order.clone() {
            let kmax = self.pole_bound();
            let mut w: Factor<C> = Factor::new();
            if g >= 1 {
                if g == 1 && rest == 0 {
                    add_into(&mut w, Vec::new(), self.bergman_deck(la));
                } else {
                    let om = self.omegas[&(g - 1, rest + 2)].clone();
                    for (key, c) in &om.terms {
                        let (own, _) = self.xi(la, key[0].0, key[0].1);
                        let (_, sig) = self.xi(la, key[1].0, key[1].1);
                        add_into(&mut w, key[2..].to_vec(), (&own * &sig).scale(c));
                    }
                }
            }
            for g1 in 0..=g {
                let g2 = g - g1;
                for mask in 0u32..(1 << rest) {
                    let i1: Vec<usize> = (0..rest).filter(|&i| mask >> i & 1 == 1).collect();
                    let i2: Vec<usize> = (0..rest).filter(|&i| mask >> i & 1 == 0).collect();
                    if (g1 == 0 && i1.is_empty()) || (g2 == 0 && i2.is_empty()) {
                        continue;
                    }
                    let f1 = self.split_factor(la, g1, i1.len(), false, kmax);
                    let f2 = self.split_factor(la, g2, i2.len(), true, kmax);
                    for (k1, s1) in &f1 {
                        for (k2, s2) in &f2 {
                            let mut key = vec![(0usize, 0u32); rest];
                            for (slot, &i) in i1.iter().enumerate() {
                                key[i] = k1[slot];
                            }
                            for (slot, &i) in i2.iter().enumerate() {
                                key[i] = k2[slot];
                            }
                            add_into(&mut w, key, s1 * s2);
                        }
                    }
                }
            }
            for (key, series) in &w {
                let p = -series.val();
                for k in 1..=(p + 1).max(1) as usize {
                    let kappa = self.kernel(la, k);
                    let res = (&kappa * series).try_coeff(-1)?;
                    if res.is_zero() {
                        continue;
                    }
                    let mut full = vec![(la, k as u32)];
                    full.extend_from_slice(key);
                    let entry = result.entry(full).or_insert_with(C::zero);
                    *entry = entry.clone() + res;
                }
            }
        }
        let om = Omega {
            g,
            n,
            terms: result,
        };
        self.omegas.insert((g, n), om.clone());
        Ok(om)
    }

    fn split_factor(
        &mut self,
        la: usize,
        g: u32,
        size: usize,
        sigma: bool,
        kmax: u32,
    ) -> Factor<C> {
        if g == 0 && size == 1 {
            self.bergman_free(la, sigma, kmax)
        } else {
            let om = self.omegas[&(g, size + 1)].clone();
            self.stable_factor(la, &om, sigma)
        }
    }
}

const EXACT_LOCAL: i64 = crate::algebra::EXACT;

/// `ω_{g,n}` with automatic retry at doubled local order on precision exhaustion.
pub fn tr_omega<C: ComplexField>(g: u32, n: usize, curve: &CurveData) -> Result<Omega<C>> {
    let needed = 6 * g as usize + 2 * n;
    let mut order = 2 * needed + 6;
    loop {
        let mut engine = TrEngine::<C>::new(*curve, order)?;
        match engine.omega(g, n) {
            Err(Error::PrecisionExhausted { .. }) if order < 16 * needed + 64 => order *= 2,
            other => return other,
        }
    }
}

/// Expansions `G_{b,m}(X) = z'(X)/(z(X) − a_b)^{m+1}` through `X^{top}`.
fn basis_expansions<C: ComplexField>(
    curve: &CurveData,
    omega: &Omega<C>,
    top: i64,
) -> HashMap<BasisIndex, Series<C>> {
    let zx = z_series(curve.q, curve.r, top + 1);
    let z: Series<C> = Series::new(
        0,
        (0..=top + 1)
            .map(|k| C::from_rational(&zx.coeff(k)))
            .collect(),
        top + 2,
    );
    let dz = z.derivative();
    let centers = branch_points::<C>(curve.q, curve.r);
    let mut out = HashMap::new();
    for key in omega.terms.keys() {
        for &(b, m) in key {
            out.entry((b, m)).or_insert_with(|| {
                let shifted = &z - &Series::new(0, vec![centers[b].clone()], EXACT_LOCAL);
                (&dz * &shifted.inv().pow(m + 1)).truncate(top + 1)
            });
        }
    }
    out
}

/// Coefficient of `Π X_i^{μ_i} dX_i/X_i` in `ω`.
pub fn expansion_coefficient<C: ComplexField>(
    omega: &Omega<C>,
    basis: &HashMap<BasisIndex, Series<C>>,
    mu: &[u32],
) -> C {
    omega.terms.iter().fold(C::zero(), |acc, (key, c)| {
        let term = key
            .iter()
            .zip(mu)
            .fold(c.clone(), |t, (idx, &m)| t * basis[idx].coeff(m as i64 - 1));
        acc + term
    })
}

#[derive(Clone, Debug)]
pub struct ConjectureCheck {
    pub report: Report,
    pub max_rel_error: f64,
    pub omega: Omega<MpComplex>,
}

fn profiles(n: usize, mu_max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=mu_max).map(move |m| {
                    let mut p = p.clone();
                    p.push(m);
                    p
                })
            })
            .collect();
    }
    out
}

/// `|a − b|/|b|`, or `|a|` when `b = 0`.
pub fn relative_error<C: ComplexField>(numeric: &C, exact: &Rational) -> f64 {
    let e = C::from_rational(exact);
    let diff = (numeric.clone() - e.clone()).modulus();
    if exact.is_zero() {
        diff
    } else {
        diff / e.modulus()
    }
}

/// Compare the expansion of `ω_{g,n}` with `Π μ_i · h_{g;μ}` for `μ_i ≤ mu_max`.
pub fn conjecture_check(
    g: u32,
    n: usize,
    curve: &CurveData,
    mu_max: u32,
) -> Result<ConjectureCheck> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::InvalidInput(format!(
            "(g, n) = ({g}, {n}) is not stable"
        )));
    }
    let prec = curve.prec;
    let (omega, basis) = mp::with_precision(prec, || -> Result<_> {
        let omega = tr_omega::<MpComplex>(g, n, curve)?;
        let basis = basis_expansions(curve, &omega, mu_max as i64);
        Ok((omega, basis))
    })?;
    let tol = curve.tolerance();
    let rows: Vec<(Item, f64)> = profiles(n, mu_max)
        .par_iter()
        .map(|mu| {
            mp::with_precision(prec, || {
                let h = connected_hurwitz(&HurwitzKey::new(g, curve.q, curve.r, mu));
                let exact = mu.iter().fold(h, |acc, &m| acc * int(m as i64));
                let numeric = expansion_coefficient(&omega, &basis, mu);
                let err = relative_error(&numeric, &exact);
                let status = if !curve.proven() {
                    Status::Evidence
                } else {
                    Status::from_bool(err < tol)
                };
                let item = Item::new(
                    format!("mu={mu:?}"),
                    rational_string(&exact),
                    format!("{} (rel err {err:.3e})", numeric.to_decimal(40)),
                    status,
                );
                (item, err)
            })
        })
        .collect();
    let max_rel_error = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let items = rows.into_iter().map(|r| r.0).collect();
    let mut report = Report::new(
        "check tr",
        params([
            ("g", g.to_string()),
            ("n", n.to_string()),
            ("q", curve.q.to_string()),
            ("r", curve.r.to_string()),
            ("mu_max", mu_max.to_string()),
            ("prec", prec.to_string()),
        ]),
        items,
    );
    report
        .params
        .insert("max_rel_error".into(), format!("{max_rel_error:.3e}"));
    Ok(ConjectureCheck {
        report,
        max_rel_error,
        omega,
    })
}

/// `ω_{0,1} = y dx` and `ω_{0,2} − dX_1 dX_2/(X_1 − X_2)^2` expanded in `X` with
/// `z(X)` obtained by numerical series reversion, against the exact closed forms.
pub fn unstable_sector_check(curve: &CurveData, order: usize) -> Result<Report> {
    if order < 2 {
        return Err(Error::InvalidInput("order must be at least 2".into()));
    }
    let (q, r) = (curve.q, curve.r);
    let qr = curve.qr();
    mp::with_precision(curve.prec, || {
        let top = 2 * order as i64 + 2;
        let x = Series::<MpComplex>::var(top);
        let lhs = &x * &(-&x.pow(qr)).exp();
        let z = lhs.revert();
        let tol = 1e-20;
        let mut items = Vec::new();
        let zq = z.pow(q);
        for mu in 1..=order as i64 {
            let exact = if mu % q as i64 == 0 && (mu / q as i64 - 1) % r as i64 == 0 {
                let n = (mu / q as i64 - 1) / r as i64;
                int(mu) * f01_coefficient(q, r, n as u64)
            } else {
                Rational::zero()
            };
            let err = relative_error(&zq.coeff(mu), &exact);
            items.push(Item::new(
                format!("omega01 X^{mu}"),
                rational_string(&exact),
                format!("rel err {err:.3e}"),
                Status::from_bool(err < tol),
            ));
        }
        let log = BoxSeries::divided_difference(&z, order).log1p();
        for a in 1..=order {
            for b in 1..=order {
                let exact = int((a * b) as i64) * f02_coefficient(q, r, a as u64, b as u64);
                let numeric = log.c[a][b].clone() * MpComplex::from_i64((a * b) as i64);
                let err = relative_error(&numeric, &exact);
                items.push(Item::new(
                    format!("omega02 X1^{a} X2^{b}"),
                    rational_string(&exact),
                    format!("rel err {err:.3e}"),
                    Status::from_bool(err < tol),
                ));
            }
        }
        Ok(Report::new(
            "check tr-unstable",
            params([
                ("q", q.to_string()),
                ("r", r.to_string()),
                ("order", order.to_string()),
                ("prec", curve.prec.to_string()),
            ]),
            items,
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use rug::ops::Pow;

    fn curve(q: u32, r: u32) -> CurveData {
        CurveData::new(q, r, 256).unwrap()
    }

    #[test]
    fn branch_point_examples() {
        mp::with_precision(256, || {
            let a = branch_points::<MpComplex>(1, 1);
            assert_eq!(a.len(), 1);
            assert!((a[0].clone() - MpComplex::one()).modulus() < 1e-70);
            let a = branch_points::<MpComplex>(2, 1);
            let s = MpComplex::real_root(&ratio(1, 2), 2);
            assert!((a[0].clone() - s.clone()).modulus() < 1e-70);
            assert!((a[1].clone() + s).modulus() < 1e-70);
            assert_eq!(branch_points::<MpComplex>(2, 3).len(), 6);
        });
    }

    #[test]
    fn local_data_is_consistent() {
        mp::with_precision(256, || {
            for (q, r) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
                for j in 0..(q * r) as usize {
                    let loc = local_data::<MpComplex>(&curve(q, r), j, 12).unwrap();
                    assert!(
                        loc.backsubstitution_residual < 1e-60,
                        "{}",
                        loc.backsubstitution_residual
                    );
                    assert!((loc.sigma.coeff(0) - loc.center.clone()).modulus() < 1e-70);
                    let ratio = loc.sigma.coeff(1) / loc.z.coeff(1);
                    assert!((ratio + MpComplex::one()).modulus() < 1e-70);
                }
            }
        });
        assert!(local_data::<MpComplex>(&curve(1, 1), 0, 1).is_err());
    }

    #[test]
    fn local_series_matches_newton_on_the_curve() {
        mp::with_precision(256, || {
            let c = curve(1, 2);
            let loc = local_data::<MpComplex>(&c, 1, 40).unwrap();
            let zeta = MpComplex::from_f64(0.01, 0.003);
            let eval = |s: &Series<MpComplex>| {
                (0..=40)
                    .rev()
                    .fold(MpComplex::zero(), |acc, k| acc * zeta.clone() + s.coeff(k))
            };
            let target = {
                let a = loc.center.0.clone();
                let xa = a.clone().ln() - a.pow(2u32);
                MpComplex(xa) + zeta.clone() * zeta.clone()
            };
            // Newton for x(z) = target from the series value
            let mut z = eval(&loc.z);
            let guess = z.clone();
            for _ in 0..20 {
                let xz = MpComplex(z.0.clone().ln() - z.0.clone().pow(2u32));
                let dx = MpComplex::one() / z.clone() - z.clone() * MpComplex::from_i64(2);
                z = z.clone() - (xz - target.clone()) / dx;
            }
            assert!((z - guess).modulus() < 1e-50);
        });
    }

    #[test]
    fn omega03_is_symmetric_and_simple() {
        mp::with_precision(256, || {
            for (q, r) in [(1, 1), (2, 1), (1, 2)] {
                let om = tr_omega::<MpComplex>(0, 3, &curve(q, r)).unwrap();
                assert!(om.symmetry_defect() < 1e-60);
                assert_eq!(om.max_pole_order(), 2);
            }
        });
    }

    #[test]
    fn omega11_pole_order() {
        mp::with_precision(256, || {
            let om = tr_omega::<MpComplex>(1, 1, &curve(1, 1)).unwrap();
            assert_eq!(om.max_pole_order(), 4);
        });
    }

    #[test]
    fn branch_order_does_not_matter() {
        mp::with_precision(256, || {
            let c = curve(2, 1);
            let mut fwd = TrEngine::<MpComplex>::new(c, 20).unwrap();
            let mut rev = TrEngine::<MpComplex>::new(c, 20)
                .unwrap()
                .with_branch_order(vec![1, 0]);
            let a = fwd.omega(1, 2).unwrap();
            let b = rev.omega(1, 2).unwrap();
            assert!(a.distance(&b) < 1e-60);
        });
    }

    #[test]
    fn genus_zero_three_points_match_engine() {
        let rep = conjecture_check(0, 3, &curve(1, 1), 3).unwrap();
        assert!(rep.max_rel_error < 1e-15, "{:?}", rep.report.items);
        assert_eq!(rep.report.status, Status::Pass);
    }

    #[test]
    fn genus_one_matches_engine() {
        let rep = conjecture_check(1, 1, &curve(2, 1), 4).unwrap();
        assert!(rep.max_rel_error < 1e-15, "{:?}", rep.report.items);
        let rep = conjecture_check(1, 1, &curve(1, 2), 4).unwrap();
        assert_eq!(rep.report.status, Status::Evidence);
    }

    #[test]
    fn doubling_precision_shrinks_errors() {
        let lo = conjecture_check(1, 1, &curve(1, 2), 3).unwrap();
        let hi = conjecture_check(1, 1, &CurveData::new(1, 2, 512).unwrap(), 3).unwrap();
        assert!(lo.max_rel_error > 0.0);
        assert!(hi.max_rel_error * 2f64.powi(32) <= lo.max_rel_error);
    }

    #[test]
    fn unstable_sectors_match_closed_forms() {
        for (q, r) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let rep = unstable_sector_check(&curve(q, r), 6).unwrap();
            assert_eq!(
                rep.status,
                Status::Pass,
                "{:?}",
                rep.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn double_precision_backend_runs() {
        let c = curve(1, 1);
        let om = tr_omega::<Complex<f64>>(0, 3, &c).unwrap();
        assert!(om.symmetry_defect() < 1e-10);
    }

    #[test]
    fn input_errors() {
        assert!(CurveData::new(1, 1, 64).is_err());
        assert!(conjecture_check(0, 2, &curve(1, 1), 3).is_err());
    }
}
