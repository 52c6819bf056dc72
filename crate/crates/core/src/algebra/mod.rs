//! Exact algebra substrate: polynomials, rational functions, truncated series,
//! interpolation and the q-difference calculus.

mod calculus;
mod interp;
mod poly;
mod ratfunc;
mod series;

pub use calculus::{
    binomial_poly, decompose, delta_q_power, diff_coeff, pochhammer_inv, pochhammer_inv_symbolic,
    q_poly, stirling_poly, stirling_second, FloorFracPair,
};
pub use interp::{lagrange_interpolate, tensor_interpolate, MultiPoly};
pub use poly::UniPoly;
pub use ratfunc::{residue_at, RationalFunction};
pub use series::{Series, EXACT};
