use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::UniPoly;
use crate::error::{Error, Result};
use crate::scalar::{rational_string, Field, Rational};

/// Quotient of two polynomials over `Rational`, kept in lowest terms with a
/// monic denominator so that structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: UniPoly<Rational>,
    den: UniPoly<Rational>,
}

impl RationalFunction {
    /// Panics if `den` is the zero polynomial.
    pub fn new(num: UniPoly<Rational>, den: UniPoly<Rational>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::from_poly(UniPoly::zero());
        }
        let g = UniPoly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = Rational::one() / den.leading();
        RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn from_poly(p: UniPoly<Rational>) -> Self {
        RationalFunction {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    pub fn numerator(&self) -> &UniPoly<Rational> {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly<Rational> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Multiplicity of `x` as a root of the denominator.
    pub fn pole_order(&self, x: &Rational) -> usize {
        let lin = UniPoly::linear(-x.clone());
        let mut d = self.den.clone();
        let mut k = 0;
        loop {
            let (q, r) = d.div_rem(&lin);
            if !r.is_zero() {
                return k;
            }
            d = q;
            k += 1;
        }
    }

    /// True when every pole is simple.
    pub fn has_simple_poles(&self) -> bool {
        UniPoly::gcd(&self.den, &self.den.derivative()).degree() == Some(0)
    }
}

/// Residue at `pole`, which must be at most a simple pole of `f`.
pub fn residue_at(f: &RationalFunction, pole: &Rational) -> Result<Rational> {
    match f.pole_order(pole) {
        0 => Ok(Rational::zero()),
        1 => Ok(f.num.eval(pole) / f.den.derivative().eval(pole)),
        order => Err(Error::HigherOrderPole { order }),
    }
}

fn poly_string(p: &UniPoly<Rational>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match k {
            0 => rational_string(c),
            1 => format!("{}*v", rational_string(c)),
            _ => format!("{}*v^{k}", rational_string(c)),
        })
        .collect();
    terms.join(" + ")
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) / ({})",
            poly_string(&self.num),
            poly_string(&self.den)
        )
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for RationalFunction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return Self::new(&self.num + &rhs.num, self.den);
        }
        Self::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for RationalFunction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for RationalFunction {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_polynomial() && rhs.is_polynomial() {
            return Self::from_poly(&self.num * &rhs.num);
        }
        Self::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for RationalFunction {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.num.is_zero(), "division by zero rational function");
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for RationalFunction {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den,
        }
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(UniPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::from_poly(UniPoly::one())
    }
}

impl Field for RationalFunction {
    fn from_rational(q: &Rational) -> Self {
        Self::constant(q.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn lin(c: i64) -> UniPoly<Rational> {
        UniPoly::linear(int(c))
    }

    #[test]
    fn normalisation() {
        let f = RationalFunction::new(&lin(1) * &lin(2), (&lin(1) * &lin(3)).scale(&int(2)));
        assert_eq!(f.denominator(), &lin(3));
        assert_eq!(
            f.numerator(),
            &lin(2).scale(&Rational::new(1.into(), 2.into()))
        );
        let g = RationalFunction::new(lin(2), lin(3)) - f.clone() - f;
        assert!(g.is_zero());
        assert_eq!(g.denominator(), &UniPoly::one());
    }

    #[test]
    fn residues() {
        let f = RationalFunction::new(UniPoly::one(), lin(1));
        assert_eq!(residue_at(&f, &int(-1)).unwrap(), int(1));
        let g = RationalFunction::new(UniPoly::x(), &lin(1) * &lin(2));
        assert_eq!(residue_at(&g, &int(-2)).unwrap(), int(2));
        assert_eq!(residue_at(&g, &int(5)).unwrap(), int(0));
        let poly = RationalFunction::from_poly(lin(7));
        assert_eq!(residue_at(&poly, &int(-7)).unwrap(), int(0));
        let h = RationalFunction::new(UniPoly::one(), &lin(1) * &lin(1));
        assert_eq!(
            residue_at(&h, &int(-1)),
            Err(Error::HigherOrderPole { order: 2 })
        );
        assert!(g.has_simple_poles() && !h.has_simple_poles());
    }
}
