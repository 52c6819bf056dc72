use std::collections::BTreeMap;

use num_traits::Zero;

use super::UniPoly;
use crate::scalar::{Field, Rational};

/// Interpolating polynomial through `(x_i, y_i)` (distinct nodes), via Newton
/// divided differences.
pub fn lagrange_interpolate<T: Field>(points: &[(T, T)]) -> UniPoly<T> {
    let n = points.len();
    let mut dd: Vec<T> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = dd[i].clone() - dd[i - 1].clone();
            let den = points[i].0.clone() - points[i - level].0.clone();
            dd[i] = num / den;
        }
    }
    let mut acc = UniPoly::zero();
    for i in (0..n).rev() {
        acc = &(&acc * &UniPoly::linear(-points[i].0.clone())) + &UniPoly::constant(dd[i].clone());
    }
    acc
}

/// Sparse multivariate polynomial over `Rational`, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn new(nvars: usize, terms: BTreeMap<Vec<u32>, Rational>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(c.clone(), |acc, (&k, xi)| acc * xi.pow_u(k as u64))
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Polynomial with variables `i` and `j` exchanged.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.swap(i, j);
                (e, c.clone())
            })
            .collect();
        MultiPoly::new(self.nvars, terms)
    }
}

/// Interpolate on the tensor grid `nodes[0] × … × nodes[n−1]`. `values` is laid
/// out row-major (last variable fastest).
pub fn tensor_interpolate(nodes: &[Vec<Rational>], values: &[Rational]) -> MultiPoly {
    let shape: Vec<usize> = nodes.iter().map(Vec::len).collect();
    assert_eq!(shape.iter().product::<usize>(), values.len());
    let mut data = values.to_vec();
    let n = shape.len();
    for axis in 0..n {
        let stride: usize = shape[axis + 1..].iter().product();
        let len = shape[axis];
        let block = stride * len;
        for start in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let idx = |k: usize| start + inner + k * stride;
                let pts: Vec<(Rational, Rational)> = (0..len)
                    .map(|k| (nodes[axis][k].clone(), data[idx(k)].clone()))
                    .collect();
                let p = lagrange_interpolate(&pts);
                for k in 0..len {
                    data[idx(k)] = p.coeff(k);
                }
            }
        }
    }
    let mut terms = BTreeMap::new();
    for (flat, c) in data.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut e = vec![0u32; n];
        let mut rest = flat;
        for axis in (0..n).rev() {
            e[axis] = (rest % shape[axis]) as u32;
            rest /= shape[axis];
        }
        terms.insert(e, c);
    }
    MultiPoly::new(n, terms)
}
