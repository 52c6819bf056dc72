use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{lagrange_interpolate, RationalFunction, UniPoly};
use crate::scalar::{binomial, factorial, int, Field, Rational};

/// `μ = base·floor + frac` with `0 ≤ frac < base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FloorFracPair {
    pub floor: u64,
    pub frac: u64,
    pub base: u64,
}

pub fn decompose(mu: u64, a: u64) -> FloorFracPair {
    assert!(a >= 1, "division base must be positive");
    FloorFracPair {
        floor: mu / a,
        frac: mu % a,
        base: a,
    }
}

/// `Δ_q^t f` with `(Δ_q f)(l) = f(l) − f(l − q)`.
pub fn delta_q_power(f: &UniPoly<Rational>, q: u64, t: u64) -> UniPoly<Rational> {
    let back = int(-(q as i64));
    let mut g = f.clone();
    for _ in 0..t {
        if g.is_zero() {
            break;
        }
        g = &g - &g.shift(&back);
    }
    g
}

/// `Q_μ^r(l) = ((l+μ)^{r+1} − l^{r+1}) / (μ(r+1))`.
pub fn q_poly(mu: i64, r: u32) -> UniPoly<Rational> {
    let mu = int(mu);
    let coeffs = (0..=r)
        .map(|k| {
            // coefficient of l^k comes from i = r − k
            let i = (r - k) as u64;
            Rational::from_integer(binomial(r as u64 + 1, i + 1)) * mu.pow_u(i) / int(r as i64 + 1)
        })
        .collect();
    UniPoly::new(coeffs)
}

pub fn stirling_second(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k as usize;
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for i in 1..=n as usize {
        for j in (1..=k.min(i)).rev() {
            row[j] = BigInt::from(j) * &row[j] + &row[j - 1];
        }
        row[0] = BigInt::zero();
    }
    row[k].clone()
}

fn stirling_cache() -> &'static Mutex<Vec<UniPoly<Rational>>> {
    static CACHE: OnceLock<Mutex<Vec<UniPoly<Rational>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![UniPoly::one()]))
}

/// The degree-`2t` polynomial with `f_t(x) = S(x + t, x)` on non-negative integers,
/// generated by `(Δ_1 f_t)(x) = x f_{t−1}(x)` and `f_t(0) = 0` for `t ≥ 1`.
pub fn stirling_poly(t: u32) -> UniPoly<Rational> {
    let mut cache = stirling_cache().lock().expect("stirling cache");
    while cache.len() <= t as usize {
        let prev = cache.last().expect("seeded").clone();
        let deg = 2 * cache.len();
        let mut pts = Vec::with_capacity(deg + 1);
        let mut acc = Rational::zero();
        for x in 0..=deg as i64 {
            if x > 0 {
                acc += int(x) * prev.eval(&int(x));
            }
            pts.push((int(x), acc.clone()));
        }
        cache.push(lagrange_interpolate(&pts));
    }
    cache[t as usize].clone()
}

/// `C(p + x, a)` as a polynomial in `x`.
pub fn binomial_poly(p: i64, a: u64) -> UniPoly<Rational> {
    let mut acc = UniPoly::one();
    for i in 0..a as i64 {
        acc = &acc * &UniPoly::linear(int(p - i));
    }
    acc.scale(&(Rational::one() / Rational::from_integer(factorial(a))))
}

/// `c^p_{m,a}(x) = (−q)^{p−m−a} C(p+x, a) f_{p−a−m}(x+m)`, the coefficient of `l^a`
/// in `Δ_q^{x+m} l^{p+x} / (q^{x+m}(x+m)!)`. Zero outside `0 ≤ a ≤ p − m`.
pub fn diff_coeff(p: i64, m: i64, a: i64, q: u64) -> UniPoly<Rational> {
    if a < 0 || a > p - m {
        return UniPoly::zero();
    }
    let t = (p - m - a) as u32;
    let sign = int(-(q as i64)).pow_u(t as u64);
    let f = stirling_poly(t).shift(&int(m));
    (&binomial_poly(p, a as u64) * &f).scale(&sign)
}

/// `1/([μ]+1)_s` continued to all integers `s` (zero for `s < −[μ]`).
pub fn pochhammer_inv(floor_mu: i64, s: i64) -> Rational {
    if s >= 0 {
        let den = (1..=s).fold(Rational::one(), |acc, i| acc * int(floor_mu + i));
        Rational::one() / den
    } else if s >= -floor_mu {
        (s + 1..=0).fold(Rational::one(), |acc, i| acc * int(floor_mu + i))
    } else {
        Rational::zero()
    }
}

/// `1/(ν+1)_s` as a rational function of the symbolic floor `ν`.
pub fn pochhammer_inv_symbolic(s: i64) -> RationalFunction {
    if s >= 0 {
        let den = (1..=s).fold(UniPoly::one(), |acc, i| &acc * &UniPoly::linear(int(i)));
        RationalFunction::new(UniPoly::one(), den)
    } else {
        let num = (s + 1..=0).fold(UniPoly::one(), |acc, i| &acc * &UniPoly::linear(int(i)));
        RationalFunction::from_poly(num)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn poly(c: &[Rational]) -> UniPoly<Rational> {
        UniPoly::new(c.to_vec())
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(
            decompose(7, 3),
            FloorFracPair {
                floor: 2,
                frac: 1,
                base: 3
            }
        );
        assert_eq!((decompose(6, 3).floor, decompose(6, 3).frac), (2, 0));
        assert_eq!((decompose(5, 12).floor, decompose(5, 12).frac), (0, 5));
    }

    #[test]
    fn delta_examples() {
        let l2 = UniPoly::monomial(int(1), 2);
        assert_eq!(delta_q_power(&l2, 1, 1), poly(&[int(-1), int(2)]));
        assert_eq!(delta_q_power(&l2, 2, 2).scale(&ratio(1, 8)), UniPoly::one());
        assert!(delta_q_power(&UniPoly::constant(int(5)), 3, 1).is_zero());
    }

    #[test]
    fn q_poly_examples() {
        for mu in 1..6 {
            assert_eq!(q_poly(mu, 1), poly(&[ratio(mu, 2), int(1)]));
        }
        assert_eq!(q_poly(1, 2), poly(&[ratio(1, 3), int(1), int(1)]));
        assert_eq!(q_poly(2, 2), poly(&[ratio(4, 3), int(2), int(1)]));
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_second(3, 2), BigInt::from(3));
        assert_eq!(stirling_second(4, 2), BigInt::from(7));
        for n in 0..8 {
            assert_eq!(stirling_second(n, n), BigInt::one());
        }
        assert_eq!(stirling_poly(0), UniPoly::one());
        assert_eq!(stirling_poly(1), poly(&[int(0), ratio(1, 2), ratio(1, 2)]));
        assert_eq!(stirling_poly(1).eval(&int(2)), int(3));
    }

    #[test]
    fn diff_coeff_examples() {
        for p in 0..4 {
            assert_eq!(diff_coeff(p, p, 0, 2), UniPoly::one());
        }
        assert_eq!(
            diff_coeff(1, 0, 0, 1),
            poly(&[int(0), ratio(-1, 2), ratio(-1, 2)])
        );
        for (p, m, a) in [(3, 0, 1), (4, 1, 2), (2, -1, 0)] {
            assert_eq!(
                diff_coeff(p, m, a, 3).degree(),
                Some((2 * p - a - 2 * m) as usize)
            );
        }
        assert!(diff_coeff(1, 0, 2, 1).is_zero());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_inv(2, 2), ratio(1, 12));
        assert_eq!(pochhammer_inv(2, -1), int(2));
        assert_eq!(pochhammer_inv(2, -3), int(0));
        for s in -3..4 {
            for nu in 0..4 {
                let sym = pochhammer_inv_symbolic(s).eval(&int(nu)).unwrap();
                assert_eq!(sym, pochhammer_inv(nu, s), "s={s} nu={nu}");
            }
        }
    }
}
