//! Scalar abstraction shared by the exact and numerical stacks.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always normalised with a positive denominator.
pub type Rational = num_rational::BigRational;

/// A commutative field in which the algebraic containers can be instantiated.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Field for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Field for f64 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

impl Field for f32 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }
}

impl Field for Complex<f64> {
    fn from_rational(q: &Rational) -> Self {
        Complex::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// Complex scalars with the handful of transcendental helpers the recursion needs.
pub trait ComplexField: Field {
    /// `r^{1/n}` for a positive rational `r`, real and positive.
    fn real_root(r: &Rational, n: u32) -> Self;
    /// `exp(2πi k/n)`.
    fn root_of_unity(k: u32, n: u32) -> Self;
    /// Principal square root.
    fn sqrt(&self) -> Self;
    /// Modulus, rounded to `f64`.
    fn modulus(&self) -> f64;
    /// Bits of working precision carried by values of this type.
    fn precision_bits() -> u32;
    fn to_c64(&self) -> Complex<f64>;
}

impl ComplexField for Complex<f64> {
    fn real_root(r: &Rational, n: u32) -> Self {
        Complex::new(r.to_f64().unwrap_or(f64::NAN).powf(1.0 / n as f64), 0.0)
    }

    fn root_of_unity(k: u32, n: u32) -> Self {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        Complex::new(theta.cos(), theta.sin())
    }

    fn sqrt(&self) -> Self {
        Complex::sqrt(*self)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn precision_bits() -> u32 {
        53
    }

    fn to_c64(&self) -> Complex<f64> {
        *self
    }
}

/// Exact rational from a pair of integers.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Render an exact rational as `p/q` (or `p` when integral).
pub fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)` with `C(n, k) = 0` for `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_and_binomial() {
        assert_eq!(ratio(2, 3).pow_u(3), ratio(8, 27));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(rational_string(&ratio(-6, 4)), "-3/2");
        assert_eq!(rational_string(&int(7)), "7");
    }

    #[test]
    fn float_instances() {
        assert_eq!(<f64 as Field>::from_rational(&ratio(1, 4)), 0.25);
        assert_eq!(<f32 as Field>::from_rational(&ratio(3, 2)), 1.5);
        assert_eq!(2.0f64.pow_u(10), 1024.0);
    }
}
