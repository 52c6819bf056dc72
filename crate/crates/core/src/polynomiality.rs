//! Interpolation harness for the polynomial part `P` of Hurwitz numbers.
//!
//! For fixed residues `η_i = ⟨μ_i⟩` the connected number equals
//! `Π μ_i^{[μ_i]}/[μ_i]! · P(μ)`; `P` is reconstructed on a tensor grid of floors
//! `ν_i = [μ_i]` and then checked on points outside the grid.

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{tensor_interpolate, MultiPoly};
use crate::error::{Error, Result};
use crate::hurwitz::{connected_hurwitz, HurwitzKey};
use crate::report::{params, Item, Report, Status};
use crate::scalar::{factorial, int, rational_string, Field, Rational};

/// The floor-independent part of `b`, `(2g − 2 + n + Σ η_i / q) / r`.
pub fn admissible_residues(g: u32, n: usize, q: u32, r: u32, residues: &[u32]) -> Result<i64> {
    let qr = q * r;
    if residues.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} residues, got {}",
            residues.len()
        )));
    }
    if let Some(e) = residues.iter().find(|&&e| e >= qr) {
        return Err(Error::InvalidInput(format!(
            "residue {e} outside [0, {qr})"
        )));
    }
    let sum: i64 = residues.iter().map(|&e| e as i64).sum();
    if sum % q as i64 != 0 {
        return Err(Error::Inadmissible(format!(
            "q = {q} does not divide Σ⟨μ_i⟩ = {sum}"
        )));
    }
    let num = 2 * g as i64 - 2 + n as i64 + sum / q as i64;
    if num % r as i64 != 0 {
        return Err(Error::Inadmissible(format!(
            "r = {r} does not divide {num}"
        )));
    }
    Ok(num / r as i64)
}

/// Every admissible residue tuple in lexicographic order.
pub fn all_admissible_residues(g: u32, n: usize, q: u32, r: u32) -> Vec<Vec<u32>> {
    let qr = q * r;
    let total = (qr as usize).pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0u32; n];
            for slot in v.iter_mut().rev() {
                *slot = (idx % qr as usize) as u32;
                idx /= qr as usize;
            }
            v
        })
        .filter(|res| admissible_residues(g, n, q, r, res).is_ok())
        .collect()
}

fn prefactor(mu: u32, qr: u32) -> Rational {
    let f = (mu / qr) as u64;
    int(mu as i64).pow_u(f) / Rational::from_integer(factorial(f))
}

/// `P` at `μ_i = qr·floors_i + residues_i`.
pub fn sample_p(
    g: u32,
    n: usize,
    q: u32,
    r: u32,
    residues: &[u32],
    floors: &[u64],
) -> Result<Rational> {
    admissible_residues(g, n, q, r, residues)?;
    if floors.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} floors, got {}",
            floors.len()
        )));
    }
    let qr = q * r;
    let mu: Vec<u32> = floors
        .iter()
        .zip(residues)
        .map(|(&f, &e)| qr * f as u32 + e)
        .collect();
    if mu.contains(&0) {
        return Err(Error::InvalidInput("every μ_i must be at least 1".into()));
    }
    let h = connected_hurwitz(&HurwitzKey::new(g, q, r, &mu));
    let pref = mu
        .iter()
        .fold(Rational::one(), |acc, &m| acc * prefactor(m, qr));
    Ok(h / pref)
}

/// Smallest floor per variable keeping `μ_i ≥ 1`.
pub fn minimal_offsets(residues: &[u32]) -> Vec<u64> {
    residues.iter().map(|&e| u64::from(e == 0)).collect()
}

/// Interpolate `P` on the grid `Π {f0_i, …, f0_i + d}`.
pub fn interpolate_p(
    g: u32,
    n: usize,
    q: u32,
    r: u32,
    residues: &[u32],
    f0: &[u64],
    d: u64,
) -> Result<MultiPoly> {
    admissible_residues(g, n, q, r, residues)?;
    let side = d as usize + 1;
    let points: Vec<Vec<u64>> = (0..side.pow(n as u32))
        .map(|mut idx| {
            let mut p = vec![0u64; n];
            for i in (0..n).rev() {
                p[i] = f0[i] + (idx % side) as u64;
                idx /= side;
            }
            p
        })
        .collect();
    let values: Result<Vec<Rational>> = points
        .par_iter()
        .map(|fl| sample_p(g, n, q, r, residues, fl))
        .collect();
    let nodes: Vec<Vec<Rational>> = f0
        .iter()
        .map(|&f| (0..=d).map(|k| int((f + k) as i64)).collect())
        .collect();
    Ok(tensor_interpolate(&nodes, &values?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyReport {
    pub g: u32,
    pub q: u32,
    pub r: u32,
    pub residues: Vec<u32>,
    pub offsets: Vec<u64>,
    pub grid_size: u64,
    pub polynomial: MultiPoly,
    pub per_variable_degree: Vec<Option<u32>>,
    pub total_degree: Option<u32>,
    pub degree_bound: u32,
    pub conjectured_degree: i64,
    pub holdouts: Vec<Item>,
    pub symmetric: bool,
}

impl PolyReport {
    pub fn degrees_within_bound(&self) -> bool {
        self.per_variable_degree
            .iter()
            .all(|d| d.is_none_or(|d| d <= self.degree_bound))
    }

    pub fn passed(&self) -> bool {
        self.degrees_within_bound()
            && self.symmetric
            && self.holdouts.iter().all(|i| i.status == Status::Pass)
    }

    pub fn to_report(&self) -> Report {
        let key = format!("residues={:?}", self.residues);
        let mut items = self.holdouts.clone();
        items.push(Item::new(
            format!("{key} per-variable degree"),
            format!("<= {}", self.degree_bound),
            format!("{:?}", self.per_variable_degree),
            Status::from_bool(self.degrees_within_bound()),
        ));
        items.push(Item::new(
            format!("{key} symmetry"),
            "symmetric",
            if self.symmetric {
                "symmetric"
            } else {
                "asymmetric"
            },
            Status::from_bool(self.symmetric),
        ));
        // informational only
        items.push(Item::new(
            format!("{key} total degree"),
            self.conjectured_degree.to_string(),
            self.total_degree.map_or("-inf".into(), |d| d.to_string()),
            Status::Pass,
        ));
        Report::new(
            "check polynomiality",
            params([
                ("g", self.g.to_string()),
                ("n", self.residues.len().to_string()),
                ("q", self.q.to_string()),
                ("r", self.r.to_string()),
                ("grid", self.grid_size.to_string()),
            ]),
            items,
        )
    }
}

pub fn verify_polynomiality(
    g: u32,
    n: usize,
    q: u32,
    r: u32,
    residues: &[u32],
    grid_size: u64,
    holdout_count: usize,
) -> Result<PolyReport> {
    let chi = 2 * g as i64 - 2 + n as i64;
    if chi <= 0 {
        return Err(Error::InvalidInput(format!(
            "(g, n) = ({g}, {n}) is unstable"
        )));
    }
    let bound = 2 * chi as u64;
    if grid_size < bound + 2 {
        return Err(Error::InvalidInput(format!(
            "grid size must be at least {}",
            bound + 2
        )));
    }
    admissible_residues(g, n, q, r, residues)?;
    let f0 = minimal_offsets(residues);
    let poly = interpolate_p(g, n, q, r, residues, &f0, grid_size)?;

    let holdouts: Vec<Item> = (0..holdout_count)
        .into_par_iter()
        .map(|j| {
            let floors: Vec<u64> = (0..n)
                .map(|i| f0[i] + grid_size + 1 + ((j + i) % (n + 1)) as u64 + j as u64)
                .collect();
            let exact = sample_p(g, n, q, r, residues, &floors)?;
            let at: Vec<Rational> = floors.iter().map(|&f| int(f as i64)).collect();
            Ok(Item::compare(
                format!("residues={residues:?} floors={floors:?}"),
                rational_string(&exact),
                rational_string(&poly.eval(&at)),
            ))
        })
        .collect::<Result<Vec<Item>>>()?;

    let mut symmetric = true;
    for i in 0..n {
        for j in i + 1..n {
            if residues[i] == residues[j] && poly.swap_vars(i, j) != poly {
                symmetric = false;
            }
        }
    }
    Ok(PolyReport {
        g,
        q,
        r,
        residues: residues.to_vec(),
        offsets: f0,
        grid_size,
        per_variable_degree: (0..n).map(|i| poly.degree_in(i)).collect(),
        total_degree: poly.total_degree(),
        polynomial: poly,
        degree_bound: bound as u32,
        conjectured_degree: 3 * g as i64 - 3 + n as i64,
        holdouts,
        symmetric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn admissibility_examples() {
        assert_eq!(admissible_residues(1, 1, 1, 1, &[0]).unwrap(), 1);
        assert_eq!(admissible_residues(0, 3, 1, 1, &[0, 0, 0]).unwrap(), 1);
        // 2g − 2 + n + Σ⟨μ⟩/q = −1 + 1 = 0, divisible by r = 2
        assert_eq!(admissible_residues(0, 1, 1, 2, &[1]).unwrap(), 0);
        assert!(admissible_residues(0, 1, 1, 2, &[0]).is_err());
        assert!(admissible_residues(1, 1, 2, 1, &[1]).is_err());
    }

    #[test]
    fn genus_zero_three_points_is_one() {
        for floors in [[1u64, 1, 1], [1, 2, 3], [2, 2, 1]] {
            assert_eq!(sample_p(0, 3, 1, 1, &[0, 0, 0], &floors).unwrap(), int(1));
        }
    }

    #[test]
    fn genus_one_one_point_is_linear() {
        let v: Vec<Rational> = (1..=3)
            .map(|f| sample_p(1, 1, 1, 1, &[0], &[f]).unwrap())
            .collect();
        assert_eq!(&v[2] - &v[1], &v[1] - &v[0]);
        assert_ne!(v[1], v[0]);
    }

    #[test]
    fn small_harness_runs() {
        let rep = verify_polynomiality(1, 1, 1, 1, &[0], 4, 2).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.total_degree, Some(1));
        let rep = verify_polynomiality(0, 3, 1, 1, &[0, 0, 0], 4, 2).unwrap();
        assert!(rep.passed());
        let mut one = BTreeMap::new();
        one.insert(vec![0, 0, 0], int(1));
        assert_eq!(rep.polynomial, MultiPoly::new(3, one));
    }

    #[test]
    fn offset_shift_leaves_polynomial_unchanged() {
        let a = interpolate_p(1, 1, 2, 1, &[0], &[1], 4).unwrap();
        let b = interpolate_p(1, 1, 2, 1, &[0], &[3], 4).unwrap();
        assert_eq!(a, b);
        let a = interpolate_p(0, 3, 1, 2, &[1, 0, 0], &[0, 1, 1], 4).unwrap();
        let b = interpolate_p(0, 3, 1, 2, &[1, 0, 0], &[1, 2, 2], 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn input_errors() {
        assert!(verify_polynomiality(0, 2, 1, 1, &[0, 0], 4, 2).is_err());
        assert!(verify_polynomiality(1, 1, 1, 1, &[0], 3, 2).is_err());
        // (0,3) needs D ≥ 4, so D = 2 is rejected
        assert!(matches!(
            verify_polynomiality(0, 3, 1, 1, &[0, 0, 0], 2, 2),
            Err(Error::InvalidInput(_))
        ));
        // at q = r = 2, (1,1) needs r | 1 + η/2, so η = 0 is inadmissible and η = 2 is the admissible tuple
        assert!(matches!(
            verify_polynomiality(1, 1, 2, 2, &[0], 6, 2),
            Err(Error::Inadmissible(_))
        ));
        let rep = verify_polynomiality(1, 1, 2, 2, &[2], 6, 2).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.total_degree, Some(1));
    }
}
