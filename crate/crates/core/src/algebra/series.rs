use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Absolute precision of a series known exactly (a Laurent polynomial).
pub const EXACT: i64 = i64::MAX;

/// Truncated Laurent series `Σ_{k ≥ val} c_k t^k + O(t^prec)`.
///
/// Coefficients at or beyond `prec` are unknown and never read.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<T> {
    val: i64,
    coeffs: Vec<T>,
    prec: i64,
}

impl<T: Field> Series<T> {
    pub fn new(val: i64, mut coeffs: Vec<T>, prec: i64) -> Self {
        if prec != EXACT {
            coeffs.truncate((prec - val).max(0) as usize);
        }
        Series { val, coeffs, prec }
    }

    /// Exact Laurent polynomial.
    pub fn exact(val: i64, coeffs: Vec<T>) -> Self {
        Self::new(val, coeffs, EXACT)
    }

    pub fn zero(prec: i64) -> Self {
        Self::new(0, Vec::new(), prec)
    }

    pub fn one(prec: i64) -> Self {
        Self::new(0, vec![T::one()], prec)
    }

    /// The series `t`.
    pub fn var(prec: i64) -> Self {
        Self::new(1, vec![T::one()], prec)
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// Coefficient of `t^k`; panics if `k` is beyond the known precision.
    pub fn coeff(&self, k: i64) -> T {
        assert!(
            k < self.prec,
            "coefficient {k} beyond precision {}",
            self.prec
        );
        self.try_coeff(k).expect("in range")
    }

    pub fn try_coeff(&self, k: i64) -> Result<T> {
        if k >= self.prec {
            return Err(Error::PrecisionExhausted {
                needed: k + 1,
                available: self.prec,
            });
        }
        if k < self.val {
            return Ok(T::zero());
        }
        Ok(self
            .coeffs
            .get((k - self.val) as usize)
            .cloned()
            .unwrap_or_else(T::zero))
    }

    /// Highest exponent stored (for exact series the degree bound).
    fn top(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(self.val, self.coeffs.clone(), prec.min(self.prec))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(
            self.val,
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            self.prec,
        )
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        let prec = if self.prec == EXACT {
            EXACT
        } else {
            self.prec + k
        };
        Self::new(self.val + k, self.coeffs.clone(), prec)
    }

    /// `f(−t)`.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if (self.val + i as i64).rem_euclid(2) == 1 {
                    -c.clone()
                } else {
                    c.clone()
                }
            })
            .collect();
        Self::new(self.val, coeffs, self.prec)
    }

    /// `d/dt`.
    pub fn derivative(&self) -> Self {
        let coeffs: Vec<T> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.clone() * T::from_i64(self.val + i as i64))
            .collect();
        let prec = if self.prec == EXACT {
            EXACT
        } else {
            self.prec - 1
        };
        Self::new(self.val - 1, coeffs, prec)
    }

    /// Drop leading coefficients that are exactly zero.
    pub fn normalize(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        Self::new(
            self.val + skip as i64,
            self.coeffs[skip..].to_vec(),
            self.prec,
        )
    }

    /// Multiplicative inverse; the leading stored coefficient must be nonzero.
    pub fn inv(&self) -> Self {
        assert!(
            !self.is_exact(),
            "inverse of an exact series needs a precision"
        );
        let a = self.normalize();
        let n = (a.prec - a.val).max(0) as usize;
        assert!(
            n > 0 && !a.coeffs.is_empty(),
            "inverse of a series without known leading term"
        );
        let c0inv = T::one() / a.coeffs[0].clone();
        let mut out: Vec<T> = Vec::with_capacity(n);
        out.push(c0inv.clone());
        for k in 1..n {
            let mut s = T::zero();
            for i in 1..=k.min(a.coeffs.len() - 1) {
                s = s + a.coeffs[i].clone() * out[k - i].clone();
            }
            out.push(-(s * c0inv.clone()));
        }
        Self::new(-a.val, out, -a.val + n as i64)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(EXACT);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Self {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            self.inv().pow((-e) as u32)
        }
    }

    /// Square root of a series `1 + O(t)`.
    pub fn sqrt_unit(&self) -> Self {
        assert!(
            self.val >= 0 && !self.is_exact(),
            "sqrt_unit needs a finite precision"
        );
        let n = self.prec.max(0) as usize;
        assert!(self.coeff(0) == T::one(), "sqrt_unit needs constant term 1");
        let two = T::from_i64(2);
        let mut s: Vec<T> = vec![T::one()];
        for k in 1..n {
            let mut acc = self.coeff(k as i64);
            for i in 1..k {
                acc = acc - s[i].clone() * s[k - i].clone();
            }
            s.push(acc / two.clone());
        }
        Self::new(0, s, self.prec)
    }

    /// Substitute `inner` (with zero constant term) into the power series `self`.
    pub fn compose(&self, inner: &Self) -> Self {
        assert!(self.val >= 0, "compose needs a power series on the outside");
        let inner = inner.normalize();
        assert!(inner.val >= 1, "inner series must vanish at 0");
        let mut prec = inner.prec;
        if self.prec != EXACT {
            prec = prec.min(self.prec.saturating_mul(inner.val));
        }
        let last = if self.prec == EXACT {
            self.top() - 1
        } else {
            self.prec - 1
        };
        let mut acc = Self::zero(prec);
        for k in (0..=last).rev() {
            acc = (&acc * &inner).truncate(prec);
            acc = &acc + &Self::new(0, vec![self.coeff(k)], prec);
        }
        acc
    }

    /// `exp(self)` for a series vanishing at 0, to the same precision.
    pub fn exp(&self) -> Self {
        assert!(!self.is_exact(), "exp needs a finite precision");
        let n = self.prec.max(1);
        let mut coeffs = Vec::with_capacity(n as usize);
        let mut c = T::one();
        for k in 0..n {
            if k > 0 {
                c = c / T::from_i64(k);
            }
            coeffs.push(c.clone());
        }
        Self::new(0, coeffs, n).compose(self)
    }

    /// Compositional inverse of `c_1 t + c_2 t² + … + O(t^prec)` with `c_1 ≠ 0`.
    pub fn revert(&self) -> Self {
        let a = self.normalize();
        assert!(
            a.val == 1 && !a.is_exact(),
            "revert needs t·(unit) + O(t^N)"
        );
        let prec = a.prec;
        let c1inv = T::one() / a.coeffs[0].clone();
        let tail = Self::new(2, a.coeffs[1..].to_vec(), prec);
        let mut t = Self::var(prec).scale(&c1inv);
        for _ in 2..prec {
            let correction = tail.compose(&t).truncate(prec);
            t = (&Self::var(prec) - &correction).scale(&c1inv);
        }
        t
    }
}

impl<T: Field> Add for &Series<T> {
    type Output = Series<T>;
    fn add(self, rhs: Self) -> Series<T> {
        let val = self.val.min(rhs.val);
        let prec = self.prec.min(rhs.prec);
        let top = if prec == EXACT {
            self.top().max(rhs.top())
        } else {
            prec
        };
        let coeffs = (val..top)
            .map(|k| self.try_coeff(k).unwrap() + rhs.try_coeff(k).unwrap())
            .collect();
        Series::new(val, coeffs, prec)
    }
}

impl<T: Field> Neg for &Series<T> {
    type Output = Series<T>;
    fn neg(self) -> Series<T> {
        Series::new(
            self.val,
            self.coeffs.iter().map(|c| -c.clone()).collect(),
            self.prec,
        )
    }
}

impl<T: Field> Sub for &Series<T> {
    type Output = Series<T>;
    fn sub(self, rhs: Self) -> Series<T> {
        self + &(-rhs)
    }
}

impl<T: Field> Mul for &Series<T> {
    type Output = Series<T>;
    fn mul(self, rhs: Self) -> Series<T> {
        let val = self.val + rhs.val;
        let prec = self
            .val
            .saturating_add(rhs.prec)
            .min(rhs.val.saturating_add(self.prec));
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Series::new(val, Vec::new(), prec);
        }
        let full = self.coeffs.len() + rhs.coeffs.len() - 1;
        let n = if prec == EXACT {
            full
        } else {
            full.min((prec - val).max(0) as usize)
        };
        let mut out = vec![T::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series::new(val, out, prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Field> $tr for Series<T> {
            type Output = Series<T>;
            fn $m(self, rhs: Self) -> Series<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Rational};

    fn s(val: i64, c: &[i64], prec: i64) -> Series<Rational> {
        Series::new(val, c.iter().map(|&x| int(x)).collect(), prec)
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_t = s(0, &[1, -1], 8);
        let g = one_minus_t.inv();
        for k in 0..8 {
            assert_eq!(g.coeff(k), int(1));
        }
        assert_eq!(g.prec(), 8);
        let laurent = s(-2, &[2], 3).inv();
        assert_eq!(laurent.val(), 2);
        assert_eq!(laurent.coeff(2), ratio(1, 2));
    }

    #[test]
    fn precision_propagates() {
        let a = s(1, &[1, 1], 5);
        let b = s(-1, &[1], EXACT);
        let p = &a * &b;
        assert_eq!((p.val(), p.prec()), (0, 4));
        assert!(p.try_coeff(4).is_err());
    }

    #[test]
    fn revert_and_compose() {
        // t + t^2 reverts to Catalan-signed series.
        let f = s(1, &[1, 1], 8);
        let g = f.revert();
        let expect = [0, 1, -1, 2, -5, 14, -42, 132];
        for (k, &c) in expect.iter().enumerate() {
            assert_eq!(g.coeff(k as i64), int(c));
        }
        let id = f.compose(&g);
        for k in 0..8 {
            assert_eq!(id.coeff(k), if k == 1 { int(1) } else { int(0) });
        }
    }

    #[test]
    fn sqrt_and_reflect() {
        let f = s(0, &[1, 2, 1], 10);
        let r = f.sqrt_unit();
        assert_eq!(r.coeff(1), int(1));
        for k in 2..10 {
            assert_eq!(r.coeff(k), int(0));
        }
        assert_eq!(s(0, &[1, 2, 3], EXACT).reflect(), s(0, &[1, -2, 3], EXACT));
    }
}
