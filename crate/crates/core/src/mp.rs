//! Multiprecision complex scalar backed by MPFR/MPC.
//!
//! Values created from scratch (`zero`, `one`, `from_rational`, ...) use the
//! precision of the calling thread, set with [`with_precision`]. Worker threads
//! inherit nothing, so parallel code must enter `with_precision` itself.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rug::float::Constant;
use rug::{Complex, Float, Integer};

use crate::scalar::{ComplexField, Field, Rational};

pub const DEFAULT_PRECISION: u32 = 256;

thread_local! {
    static PRECISION: Cell<u32> = const { Cell::new(DEFAULT_PRECISION) };
}

/// Current working precision (bits) of this thread.
pub fn precision() -> u32 {
    PRECISION.with(|p| p.get())
}

struct Restore(u32);

impl Drop for Restore {
    fn drop(&mut self) {
        PRECISION.with(|p| p.set(self.0));
    }
}

/// Run `f` with the thread's working precision set to `bits`.
pub fn with_precision<R>(bits: u32, f: impl FnOnce() -> R) -> R {
    let _restore = Restore(PRECISION.with(|p| p.replace(bits)));
    f()
}

#[derive(Clone, PartialEq)]
pub struct MpComplex(pub Complex);

impl MpComplex {
    pub fn from_f64(re: f64, im: f64) -> Self {
        MpComplex(Complex::with_val(precision(), (re, im)))
    }

    pub fn re_f64(&self) -> f64 {
        self.0.real().to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.0.imag().to_f64()
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = self.0.real().to_string_radix(10, Some(digits));
        let im = self.0.imag().to_string_radix(10, Some(digits));
        format!("{re} + {im}i")
    }
}

impl fmt::Debug for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

fn float_from_rational(q: &Rational, prec: u32) -> Float {
    let n = Integer::from_str_radix(&q.numer().to_str_radix(16), 16).expect("integer");
    let d = Integer::from_str_radix(&q.denom().to_str_radix(16), 16).expect("integer");
    Float::with_val(prec, n) / Float::with_val(prec, d)
}

impl Add for MpComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        MpComplex(self.0 + rhs.0)
    }
}

impl Sub for MpComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        MpComplex(self.0 - rhs.0)
    }
}

impl Mul for MpComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        MpComplex(self.0 * rhs.0)
    }
}

impl Div for MpComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        MpComplex(self.0 / rhs.0)
    }
}

impl Neg for MpComplex {
    type Output = Self;
    fn neg(self) -> Self {
        MpComplex(-self.0)
    }
}

impl Zero for MpComplex {
    fn zero() -> Self {
        MpComplex(Complex::new(precision()))
    }

    fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }
}

impl One for MpComplex {
    fn one() -> Self {
        MpComplex(Complex::with_val(precision(), 1))
    }
}

impl Field for MpComplex {
    fn from_rational(q: &Rational) -> Self {
        let prec = precision();
        MpComplex(Complex::with_val(prec, float_from_rational(q, prec)))
    }
}

impl ComplexField for MpComplex {
    fn real_root(r: &Rational, n: u32) -> Self {
        let prec = precision();
        let x = float_from_rational(r, prec).root(n);
        MpComplex(Complex::with_val(prec, x))
    }

    fn root_of_unity(k: u32, n: u32) -> Self {
        let prec = precision();
        let theta = Float::with_val(prec, Constant::Pi) * 2u32 * k / n;
        let (s, c) = theta.sin_cos(Float::new(prec));
        MpComplex(Complex::with_val(prec, (c, s)))
    }

    fn sqrt(&self) -> Self {
        MpComplex(self.0.clone().sqrt())
    }

    fn modulus(&self) -> f64 {
        self.0.clone().abs().real().to_f64()
    }

    fn precision_bits() -> u32 {
        precision()
    }

    fn to_c64(&self) -> num_complex::Complex<f64> {
        num_complex::Complex::new(self.re_f64(), self.im_f64())
    }
}
