//! Oracle-backed tests for exact Puiseux-series arithmetic.

mod common;

use common::*;
use nahmforge_core::series::rat_to_string;
use nahmforge_core::{rat, rat_int, series_equal, FracExponent, PuiseuxSeries, SeriesCompare};

#[test]
fn monomial_constant_one() {
    let s = PuiseuxSeries::monomial(fe(0, 1), rat_int(1), fe(10, 1)).unwrap();
    assert_eq!(s.coeff(fe(0, 1)), rat_int(1));
    assert_eq!(s.term_count(), 1);
}

#[test]
fn monomial_half_exponent() {
    let s = PuiseuxSeries::monomial(fe(1, 2), rat_int(1), fe(5, 1)).unwrap();
    assert_eq!(s.coeff(fe(1, 2)), rat_int(1));
    assert_eq!(s.exponent_denominator(), 2);
}

#[test]
fn monomial_eta_prefactor() {
    // exponent -1/24 arises as a generalized-eta prefactor: (4/2)*P2(1/4)
    // with P2(1/4) = 1/16 - 1/4 + 1/6 = -1/48, so 2*(-1/48) = -1/24.
    let s = PuiseuxSeries::monomial(fe(-1, 24), rat_int(1), fe(3, 1)).unwrap();
    assert_eq!(s.exponent_denominator(), 24);
    assert_eq!(s.coeff(fe(-1, 24)), rat_int(1));
}

#[test]
fn monomial_above_order_errors() {
    assert!(PuiseuxSeries::monomial(fe(10, 1), rat_int(1), fe(10, 1)).is_err());
}

#[test]
fn add_cancels() {
    let order = fe(10, 1);
    let a = PuiseuxSeries::one(order).sub(&qpow(fe(1, 1), order));
    let s = a.add(&qpow(fe(1, 1), order));
    assert!(series_equal(&s, &PuiseuxSeries::one(order)).is_equal());
}

#[test]
fn mul_truncated_product() {
    // (1-q-q^2+q^3) * 1/(1-q) = (1-q)(1-q^2)/(1-q) = 1 - q^2 exactly
    let order = fe(4, 1);
    let a = PuiseuxSeries::pochhammer_finite(fe(1, 1), 1, fe(1, 1), 2, order).unwrap();
    let geom = PuiseuxSeries::one(order)
        .sub(&qpow(fe(1, 1), order))
        .invert()
        .unwrap();
    let p = a.mul(&geom);
    assert_eq!(p.coeff(fe(0, 1)), rat_int(1));
    assert_eq!(p.coeff(fe(1, 1)), rat_int(0));
    assert_eq!(p.coeff(fe(2, 1)), rat_int(-1));
    assert_eq!(p.coeff(fe(3, 1)), rat_int(0));
}

#[test]
fn invert_two_part_partitions() {
    // 1/((1-q)(1-q^2)) counts partitions into parts <= 2.
    let order = fe(5, 1);
    let a = PuiseuxSeries::pochhammer_finite(fe(1, 1), 1, fe(1, 1), 2, order).unwrap();
    let inv = a.invert().unwrap();
    for n in 0..5usize {
        assert_eq!(
            inv.coeff(fe(n as i64, 1)),
            big(partitions_with_max_part(n, 2)),
            "partition count mismatch at n={n}"
        );
    }
}

#[test]
fn invert_of_monomial() {
    let order = fe(10, 1);
    let m = PuiseuxSeries::monomial(fe(3, 2), rat(2, 1), order).unwrap();
    let inv = m.invert().unwrap();
    assert_eq!(inv.coeff(fe(-3, 2)), rat(1, 2));
    assert_eq!(inv.term_count(), 1);
}

#[test]
fn invert_zero_errors() {
    assert!(PuiseuxSeries::zero(fe(5, 1)).invert().is_err());
}

#[test]
fn pochhammer_finite_examples() {
    let order = fe(10, 1);
    // empty product
    let p0 = PuiseuxSeries::pochhammer_finite(fe(1, 1), 1, fe(1, 1), 0, order).unwrap();
    assert!(series_equal(&p0, &PuiseuxSeries::one(order)).is_equal());
    // (1-q)(1-q^2) = 1 - q - q^2 + q^3
    let p2 = PuiseuxSeries::pochhammer_finite(fe(1, 1), 1, fe(1, 1), 2, order).unwrap();
    assert_eq!(p2.coeff(fe(0, 1)), rat_int(1));
    assert_eq!(p2.coeff(fe(1, 1)), rat_int(-1));
    assert_eq!(p2.coeff(fe(2, 1)), rat_int(-1));
    assert_eq!(p2.coeff(fe(3, 1)), rat_int(1));
    // single negative-base factor: 1 + q^{1/2}
    let p1 = PuiseuxSeries::pochhammer_finite(fe(1, 2), -1, fe(1, 1), 1, order).unwrap();
    assert_eq!(p1.coeff(fe(0, 1)), rat_int(1));
    assert_eq!(p1.coeff(fe(1, 2)), rat_int(1));
}

#[test]
fn pochhammer_infinite_pentagonal() {
    // (q;q)_inf against an independent dense-product oracle.
    let order = fe(30, 1);
    let p = PuiseuxSeries::pochhammer_infinite(fe(1, 1), 1, fe(1, 1), order).unwrap();
    let mut oracle = DensePoly::one(30);
    for n in 1..30 {
        oracle.mul_factor(n, 1);
    }
    assert!(series_equal(&p, &oracle.to_series(1, order)).is_equal());
    // spot-check the pentagonal pattern
    assert_eq!(p.coeff(fe(0, 1)), rat_int(1));
    assert_eq!(p.coeff(fe(1, 1)), rat_int(-1));
    assert_eq!(p.coeff(fe(2, 1)), rat_int(-1));
    assert_eq!(p.coeff(fe(5, 1)), rat_int(1));
    assert_eq!(p.coeff(fe(7, 1)), rat_int(1));
    assert_eq!(p.coeff(fe(12, 1)), rat_int(-1));
    assert_eq!(p.coeff(fe(3, 1)), rat_int(0));
}

#[test]
fn pochhammer_infinite_far_base_is_one() {
    let order = fe(10, 1);
    let p = PuiseuxSeries::pochhammer_infinite(fe(100, 1), 1, fe(1, 1), order).unwrap();
    assert!(series_equal(&p, &PuiseuxSeries::one(order)).is_equal());
}

#[test]
fn pochhammer_infinite_distinct_odd_parts() {
    // (-q;q^2)_inf generates partitions into distinct odd parts.
    let order = fe(20, 1);
    let p = PuiseuxSeries::pochhammer_infinite(fe(1, 1), -1, fe(2, 1), order).unwrap();
    for n in 0..20usize {
        assert_eq!(
            p.coeff(fe(n as i64, 1)),
            big(distinct_odd_partitions(n)),
            "distinct-odd count mismatch at n={n}"
        );
    }
}

#[test]
fn pochhammer_infinite_divergent_errors() {
    assert!(PuiseuxSeries::pochhammer_infinite(fe(-1, 1), 1, fe(1, 1), fe(10, 1)).is_err());
}

#[test]
fn pochhammer_infinite_base_one_degenerates() {
    // (1;q)_inf = 0 identically; (-1;q)_inf carries a factor 2.
    let order = fe(10, 1);
    let z = PuiseuxSeries::pochhammer_infinite(fe(0, 1), 1, fe(1, 1), order).unwrap();
    assert!(z.is_zero_series());
    let two = PuiseuxSeries::pochhammer_infinite(fe(0, 1), -1, fe(1, 1), order).unwrap();
    assert_eq!(two.coeff(fe(0, 1)), rat_int(2));
}

#[test]
fn alternating_modulus_pochhammer() {
    // (x; -q)_inf with x = -q: factors (1+q)(1-q^2)(1+q^3)(1-q^4)...
    let order = fe(25, 1);
    let p = PuiseuxSeries::alt_pochhammer_infinite(-1, fe(1, 1), fe(1, 1), order).unwrap();
    let mut oracle = DensePoly::one(25);
    for n in 1..25 {
        let sign: i128 = if (n - 1) % 2 == 0 { -1 } else { 1 };
        oracle.mul_factor(n, sign);
    }
    assert!(series_equal(&p, &oracle.to_series(1, order)).is_equal());
}

#[test]
fn partition_generating_function() {
    // 1/(q;q)_inf has partition-count coefficients (independent DP oracle).
    let order = fe(40, 1);
    let euler = PuiseuxSeries::pochhammer_infinite(fe(1, 1), 1, fe(1, 1), order).unwrap();
    let pgf = euler.invert().unwrap();
    for n in 0..40usize {
        assert_eq!(
            pgf.coeff(fe(n as i64, 1)),
            big(partition_count(n)),
            "partition count mismatch at n={n}"
        );
    }
}

#[test]
fn sqrt_recovers_factor() {
    let order = fe(30, 1);
    let euler = PuiseuxSeries::pochhammer_infinite(fe(1, 1), 1, fe(1, 1), order).unwrap();
    let sq = euler.mul(&euler);
    let root = sq.sqrt().unwrap();
    assert!(series_equal(&root, &euler).is_equal());
}

#[test]
fn sqrt_requires_unit_leading_coefficient() {
    let order = fe(10, 1);
    let s = PuiseuxSeries::monomial(fe(0, 1), rat_int(2), order).unwrap();
    assert!(s.sqrt().is_err());
}

#[test]
fn pow_matches_repeated_mul() {
    let order = fe(20, 1);
    let a = PuiseuxSeries::pochhammer_finite(fe(1, 1), 1, fe(1, 1), 3, order).unwrap();
    let p3 = a.pow(3).unwrap();
    let manual = a.mul(&a).mul(&a);
    assert!(series_equal(&p3, &manual).is_equal());
    let pm2 = a.pow(-2).unwrap();
    let manual_inv = a.invert().unwrap();
    let manual2 = manual_inv.mul(&manual_inv);
    assert!(series_equal(&pm2, &manual2).is_equal());
}

#[test]
fn scale_exponents_doubles() {
    let order = fe(10, 1);
    let a = PuiseuxSeries::pochhammer_infinite(fe(1, 1), 1, fe(1, 1), order).unwrap();
    let doubled = a.scale_exponents(fe(2, 1)).unwrap();
    assert_eq!(doubled.order(), fe(20, 1));
    for n in 0..10 {
        assert_eq!(doubled.coeff(fe(2 * n, 1)), a.coeff(fe(n, 1)));
        assert_eq!(doubled.coeff(fe(2 * n + 1, 1)), rat_int(0));
    }
    let halved = a.scale_exponents(fe(1, 2)).unwrap();
    assert_eq!(halved.order(), fe(5, 1));
    assert_eq!(halved.coeff(fe(1, 2)), a.coeff(fe(1, 1)));
}

#[test]
fn series_equal_reports_first_mismatch() {
    let order = fe(10, 1);
    let a = PuiseuxSeries::one(order).add(&qpow(fe(1, 1), order));
    let b = PuiseuxSeries::one(order).sub(&qpow(fe(1, 1), order));
    match series_equal(&a, &b) {
        SeriesCompare::Mismatch { exponent, lhs, rhs } => {
            assert_eq!(exponent, fe(1, 1));
            assert_eq!(lhs, rat_int(1));
            assert_eq!(rhs, rat_int(-1));
        }
        other => panic!("expected mismatch, got {other:?}"),
    }
}

#[test]
fn json_round_trip() {
    let order = fe(10, 1);
    let a = PuiseuxSeries::pochhammer_infinite(fe(1, 2), -1, fe(1, 1), order)
        .unwrap()
        .shifted_scaled(fe(-1, 24), &rat(3, 7));
    let j = a.to_json();
    let back = PuiseuxSeries::from_json(&j).unwrap();
    assert!(series_equal(&a, &back).is_equal());
    assert_eq!(a.order(), back.order());
    // terms are sorted by key
    let terms = j["terms"].as_array().unwrap();
    let keys: Vec<i64> = terms.iter().map(|t| t[0].as_i64().unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn rational_string_rendering() {
    assert_eq!(rat_to_string(&rat(3, 7)), "3/7");
    assert_eq!(rat_to_string(&rat_int(-4)), "-4");
}
