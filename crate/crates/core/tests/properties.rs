use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use orbifold_hurwitz::a_operators::{a_operator, poles_within, symbolic_correlator};
use orbifold_hurwitz::algebra::{
    decompose, delta_q_power, diff_coeff, pochhammer_inv, stirling_poly, stirling_second, UniPoly,
};
use orbifold_hurwitz::fock::{
    apply_alpha, apply_band, apply_e, apply_f, band_commutator, f_eigenvalue, half, vev,
    BandOperator, FockVector, Op, Partition,
};
use orbifold_hurwitz::hurwitz::{connected_hurwitz, disconnected_hurwitz, HurwitzKey};
use orbifold_hurwitz::scalar::{factorial, int, ratio};
use orbifold_hurwitz::{Field, QPoly, Rational};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn poly(max_deg: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((-4i64..=4, 1i64..=3), 1..=max_deg + 1)
        .prop_map(|c| UniPoly::new(c.into_iter().map(|(n, d)| ratio(n, d)).collect()))
}

fn partition(max_size: u32) -> impl Strategy<Value = Partition> {
    (0..=max_size).prop_flat_map(|n| {
        let all = Partition::all_of_size(n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn nonzero(bound: i64) -> impl Strategy<Value = i64> {
    (-bound..=bound).prop_filter("nonzero", |a| *a != 0)
}

fn basis(lambda: &Partition, cap: u64) -> FockVector {
    FockVector::basis(lambda.clone(), cap).unwrap()
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn decompose_round_trip(mu in 1u64..=10_000, a in 1u64..=60) {
        let d = decompose(mu, a);
        prop_assert_eq!(a * d.floor + d.frac, mu);
        prop_assert!(d.frac < a);
    }

    #[test]
    fn delta_leibniz(f in poly(6), g in poly(6), q in 1u64..=4) {
        let lhs = delta_q_power(&(&f * &g), q, 1);
        let back = int(-(q as i64));
        let rhs = &(&delta_q_power(&f, q, 1) * &g) + &(&f.shift(&back) * &delta_q_power(&g, q, 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_annihilates_degree(f in poly(6), q in 1u64..=4) {
        let d = f.degree().unwrap_or(0) as u64;
        prop_assert!(delta_q_power(&f, q, d + 1).is_zero());
    }

    #[test]
    fn pochhammer_inverse(floor in 0i64..=25, s in -25i64..=12) {
        prop_assume!(s >= -floor);
        // (floor+1)_s = (floor+s)!/floor!
        let rising = Rational::new(factorial((floor + s) as u64), factorial(floor as u64));
        prop_assert_eq!(pochhammer_inv(floor, s) * rising, Rational::one());
    }
}

#[test]
fn stirling_poly_matches_numbers() {
    for t in 0..=5u32 {
        let p = stirling_poly(t);
        for x in 0..=12u64 {
            let expect = Rational::from_integer(stirling_second(x + t as u64, x));
            assert_eq!(p.eval(&int(x as i64)), expect, "t={t} x={x}");
        }
    }
}

#[test]
fn diff_coeff_reproduces_difference_operator() {
    for q in 1..=3u64 {
        for p in 0..=5i64 {
            for m in 0..=p {
                for x in 0..=4i64 {
                    let e = (x + m) as u64;
                    let norm = int(q as i64).pow_u(e) * Rational::from_integer(factorial(e));
                    let mono = UniPoly::monomial(Rational::one(), (p + x) as usize);
                    let lhs = delta_q_power(&mono, q, e).scale(&(Rational::one() / norm));
                    let rhs = UniPoly::new(
                        (0..=p - m)
                            .map(|a| diff_coeff(p, m, a, q).eval(&int(x)))
                            .collect(),
                    );
                    assert_eq!(lhs, rhs, "q={q} p={p} m={m} x={x}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn band_commutator_identity(
        g in poly(3), f in poly(3), a in -3i64..=3, b in -3i64..=3, lambda in partition(6),
    ) {
        let cap = 16;
        let v = basis(&lambda, cap);
        let op_a = BandOperator::new(a, g.clone());
        let op_b = BandOperator::new(b, f.clone());
        let ab = apply_band(&op_a, &apply_band(&op_b, &v).unwrap()).unwrap();
        let ba = apply_band(&op_b, &apply_band(&op_a, &v).unwrap()).unwrap();
        let rhs = apply_band(&band_commutator(&g, a, &f, b), &v).unwrap();
        prop_assert_eq!(ab.sub(&ba), rhs);
    }

    #[test]
    fn alpha_commutation(a in nonzero(4), b in nonzero(4), lambda in partition(8)) {
        let v = basis(&lambda, 16);
        let ab = apply_alpha(a, &apply_alpha(b, &v).unwrap()).unwrap();
        let ba = apply_alpha(b, &apply_alpha(a, &v).unwrap()).unwrap();
        let expect = if a + b == 0 { v.scale(&int(a)) } else { FockVector::zero(16) };
        prop_assert_eq!(ab.sub(&ba), expect);
    }

    #[test]
    fn energy_grading(n in nonzero(5), k in 0u32..=5, lambda in partition(8)) {
        let v = basis(&lambda, 16);
        for mu in apply_alpha(n, &v).unwrap().terms().keys() {
            prop_assert_eq!(mu.size() as i64, lambda.size() as i64 - n);
        }
        for mu in apply_f(k, &v).terms().keys() {
            prop_assert_eq!(mu, &lambda);
        }
    }

    #[test]
    fn f_eigenvalue_matches_diagonal_sum(n in 0u32..=4, lambda in partition(10)) {
        let v = basis(&lambda, 10);
        let top = lambda.parts().first().copied().unwrap_or(0) as i64;
        let mut direct = FockVector::zero(10);
        for k in -(lambda.len() as i64) - 1..=top {
            let term = apply_e(k, k, &v).unwrap().scale(&half(k).pow_u(n as u64));
            direct = direct.add(&term);
        }
        prop_assert_eq!(direct.coeff(&lambda), f_eigenvalue(n, &lambda));
        prop_assert_eq!(direct.terms().len() <= 1, true);
    }

    #[test]
    fn nonzero_energy_vev_vanishes(
        alphas in prop::collection::vec(nonzero(4), 1..=5), f in 0u32..=3,
    ) {
        let total: i64 = alphas.iter().sum();
        prop_assume!(total != 0);
        let mut ops: Vec<Op> = alphas.into_iter().map(Op::Alpha).collect();
        ops.insert(ops.len() / 2, Op::F(f));
        prop_assert_eq!(vev(&ops, 20).unwrap(), Rational::zero());
    }
}

fn profile() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=3, 1..=3)
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn connected_symmetric(g in 0u32..=1, q in 1u32..=2, r in 1u32..=2, mu in profile()) {
        let h = connected_hurwitz(&HurwitzKey::new(g, q, r, &mu));
        let mut rev = mu.clone();
        rev.reverse();
        prop_assert_eq!(connected_hurwitz(&HurwitzKey::new(g, q, r, &rev)), h.clone());
        rev.rotate_left(1);
        prop_assert_eq!(connected_hurwitz(&HurwitzKey::new(g, q, r, &rev)), h);
    }

    #[test]
    fn vanishing(g in 0u32..=2, q in 1u32..=3, r in 1u32..=3, mu in profile()) {
        let key = HurwitzKey::new(g, q, r, &mu);
        let d: u32 = mu.iter().sum();
        let n = mu.len() as i64;
        let num = 2 * g as i64 - 2 + n + (d / q) as i64;
        if !d.is_multiple_of(q) || num < 0 || num % r as i64 != 0 {
            prop_assert_eq!(disconnected_hurwitz(&key), Rational::zero());
        }
    }

    #[test]
    fn single_part_degree_one(q in 1u32..=5, r in 1u32..=4) {
        prop_assert_eq!(disconnected_hurwitz(&HurwitzKey::new(0, q, r, &[q])), ratio(1, q as i64));
    }

    #[test]
    fn a_operator_u_lower_bound(mu in 1u32..=14, r in 1u32..=3, order in 0i64..=3) {
        let table = a_operator(mu, 1, r, order);
        let floor = (mu / r) as i64;
        if let Some(p) = table.min_u_power() {
            prop_assert!(p >= -(r as i64) * floor, "u^{p} below -r[mu]");
        }
        for p in table.u_powers() {
            prop_assert!(table.offsets_at(p).len() < 64);
        }
    }

    #[test]
    fn symbolic_poles(
        q in 1u32..=2, r in 1u32..=2, eta1 in 0u32..4, eta2 in 0u32..4, floor in 0u64..=1,
        u_power in 0i64..=2,
    ) {
        let qr = q * r;
        prop_assume!(eta1 < qr && eta2 < qr && (eta1 + eta2) % q == 0);
        prop_assume!(qr as u64 * floor + eta2 as u64 > 0);
        let c = symbolic_correlator(&[eta1, eta2], &[floor], q, r, u_power).unwrap();
        // The E-part has square-free denominator.
        let den = c.e_part.denominator().clone();
        prop_assert_eq!(UniPoly::gcd(&den, &den.derivative()).degree(), Some(0));
        // Poles of the whole correlator: simple at negative integers, and at
        // mu = 0 at most double, double only when the identity part is present.
        let total = c.total();
        let at_zero = ratio(-(eta1 as i64), qr as i64);
        let mut allowed: Vec<Rational> = (1..=u_power / r as i64 + 1).map(|m| int(-m)).collect();
        allowed.push(at_zero.clone());
        prop_assert!(poles_within(&total, &allowed));
        for m in 1..=u_power / r as i64 + 1 {
            if int(-m) != at_zero {
                prop_assert!(total.pole_order(&int(-m)) <= 1);
            }
        }
        let cap = if eta1 % q == 0 { 2 } else { 1 };
        prop_assert!(total.pole_order(&at_zero) <= cap);
    }
}

/// The identity part of the first operator carries `1/μ` twice, so the
/// correlator has a double pole at `μ = 0`: at q = r = 2, η = 2 its u^0 term is
/// `1/(μ(2ν+1)) = 1/(2(2ν+1)²)` times the vacuum coefficient.
#[test]
fn identity_part_double_pole() {
    let c = symbolic_correlator(&[2, 2], &[0], 2, 2, 2).unwrap();
    assert_eq!(c.identity_part.pole_order(&ratio(-1, 2)), 2);
    assert_eq!(c.e_part.pole_order(&ratio(-1, 2)), 0);
}
