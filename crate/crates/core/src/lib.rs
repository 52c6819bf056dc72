//! Exact computational engine for q-orbifold r-spin Hurwitz numbers.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`] – exact rationals, dense polynomials and truncated series that are
//!   generic over the scalar [`Field`], plus rational functions, q-difference calculus
//!   and Stirling polynomials over [`Rational`].
//! * [`fock`] – the charge-zero semi-infinite wedge space with the actions of
//!   `E_{i,j}`, `α_n`, `ℱ_n` and banded operators.
//! * [`hurwitz`] – disconnected/connected Hurwitz numbers and independent oracles.
//! * [`a_operators`] – the conjugated operators that isolate the polynomial part,
//!   their inverses, symbolic correlators and residues.
//! * [`polynomiality`] – interpolation harness for the polynomial part `P`.
//! * [`unstable`] – the `(0,1)` and `(0,2)` sectors as exact series identities.
//! * [`spectral_tr`] – numerical topological recursion on `x = log z − z^{qr}`, `y = z^q`.
//!
//! Numerical code is generic over [`ComplexField`]; the exact stack runs over
//! [`Rational`].

pub mod a_operators;
pub mod algebra;
pub mod error;
pub mod fock;
pub mod hurwitz;
pub mod mp;
pub mod polynomiality;
pub mod report;
pub mod scalar;
pub mod spectral_tr;
pub mod unstable;

pub use error::{Error, Result};
pub use scalar::{ComplexField, Field, Rational};

/// Dense univariate polynomial with exact coefficients.
pub type QPoly = algebra::UniPoly<Rational>;
/// Truncated Laurent series with exact coefficients (the formal variable `u`).
pub type USeries = algebra::Series<Rational>;
/// Truncated power series in `X = e^x` with exact coefficients.
pub type XSeries = algebra::Series<Rational>;
/// Multiprecision complex scalar used by the numerical recursion.
pub type MpComplex = mp::MpComplex;
/// Double-precision complex scalar, handy for quick numerical runs.
pub type C64 = num_complex::Complex<f64>;
