//! Nahm-engine oracle tests: the rank-2 Capparelli product, family
//! constructor spot values, enumeration-completeness sentinels, descending
//! sums against their infinite products, and numeric/exact agreement.

mod common;

use common::fe;
use nahmforge_core::nahm::{EvalOptions, eval_nahm_with};
use nahmforge_core::{
    build_capparelli, build_family, build_sum_c, eval_descending, eval_nahm, eval_nahm_numeric_tau,
    eval_wang_gen, rat, rat_int, series_equal, DescendingFamily, DescendingSumSpec, FracExponent,
    NahmFamily, NahmSpec, PuiseuxSeries, Rat,
};
use num_complex::Complex64;
use num_traits::{One, Zero};

fn poch_inf(e: FracExponent, sign: i8, t: FracExponent, order: FracExponent) -> PuiseuxSeries {
    PuiseuxSeries::pochhammer_infinite(e, sign, t, order).unwrap()
}

#[test]
fn capparelli_sum_equals_product() {
    // sum side with A=[[4,2],[6,4]], b=0, d=(1,3) versus
    // (-q^2; q^6)inf (-q^3; q^6)inf (-q^4; q^6)inf (-q^6; q^6)inf
    let order = fe(13, 1);
    let spec = build_capparelli();
    let lhs = eval_nahm(&spec, order, false).unwrap();
    let mut rhs = PuiseuxSeries::one(order);
    for e in [2i64, 3, 4, 6] {
        rhs = rhs.mul(&poch_inf(fe(e, 1), -1, fe(6, 1), order));
    }
    let cmp = series_equal(&lhs, &rhs);
    assert!(cmp.is_equal(), "{cmp}");
}

#[test]
fn capparelli_with_constant_shifts_by_c() {
    let order = fe(10, 1);
    let spec = build_capparelli();
    let plain = eval_nahm(&spec, order, false).unwrap();
    let shifted = eval_nahm(&spec, order, true).unwrap();
    // q^{-1/24} * plain truncated to the same order matches
    let expected = plain.shifted_scaled(fe(-1, 24), &Rat::one()).truncate(order);
    assert!(series_equal(&shifted, &expected).is_equal());
}

#[test]
fn enumeration_sentinel_wider_caps_agree() {
    let order = fe(25, 1);
    for (family, j) in [
        (NahmFamily::T1_1_1, 0),
        (NahmFamily::T1_1_1, 2),
        (NahmFamily::T1_2, 1),
        (NahmFamily::T1_3, 0),
        (NahmFamily::T1_3, 3),
    ] {
        let spec = build_family(family, 3, j).unwrap();
        let base = eval_nahm(&spec, order, false).unwrap();
        let wide = eval_nahm_with(&spec, order, false, EvalOptions { cap_margin: 2 }).unwrap();
        assert!(
            series_equal(&base, &wide).is_equal(),
            "caps too small for {family} j={j}"
        );
    }
}

#[test]
fn family_matrices_spot_values() {
    // rank-3 second-kind family: A = [[1,0,1/2],[0,2,1],[1,2,2]]
    let s = build_family(NahmFamily::T1_2, 3, 0).unwrap();
    assert_eq!(s.d, vec![1, 1, 2]);
    assert_eq!(
        s.a,
        vec![
            vec![rat_int(1), rat_int(0), rat(1, 2)],
            vec![rat_int(0), rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(2), rat_int(2)],
        ]
    );
    assert_eq!(s.b, vec![rat_int(1), rat_int(1), rat_int(2)]);
    assert!(s.validate_symmetrizable());

    // rank-2 constants
    assert_eq!(build_family(NahmFamily::T1_1_1, 2, 0).unwrap().c, rat(-3, 56));
    assert_eq!(build_family(NahmFamily::T1_2, 2, 2).unwrap().c, rat(-3, 56));
    assert_eq!(build_family(NahmFamily::T1_1_2, 2, 0).unwrap().c, rat(-1, 40));
    // alternating family carries the sign coordinate r
    assert_eq!(build_family(NahmFamily::T1_3, 4, 1).unwrap().sign_coord, Some(4));
    assert!(build_family(NahmFamily::T1_1_1, 1, 0).is_err());
    assert!(build_family(NahmFamily::T1_1_1, 3, 4).is_err());
}

#[test]
fn combined_sum_vectors() {
    let (s1, s2, shift) = build_sum_c(4).unwrap();
    assert_eq!(s1.b, vec![rat_int(0), rat_int(0), rat_int(0), rat_int(1)]);
    assert_eq!(s2.b, vec![rat_int(1), rat_int(2), rat_int(4), rat_int(4)]);
    assert_eq!(shift, fe(1, 2));
    assert!(s1.c.is_zero() && s2.c.is_zero());
}

#[test]
fn descending_2_1a_rank2_equals_product() {
    // single-variable case: sum_{N>=0} q^{N^2} / ((q;q)_N (q;q^2)_N)
    // equals (q^6, q^8, q^14; q^14)inf / (q;q)inf
    let order = fe(30, 1);
    let spec = DescendingSumSpec {
        family: DescendingFamily::D2_1a,
        r: 2,
        j: 0,
    };
    let lhs = eval_descending(&spec, order).unwrap();
    let rhs = poch_inf(fe(6, 1), 1, fe(14, 1), order)
        .mul(&poch_inf(fe(8, 1), 1, fe(14, 1), order))
        .mul(&poch_inf(fe(14, 1), 1, fe(14, 1), order))
        .mul(&poch_inf(fe(1, 1), 1, fe(1, 1), order).invert().unwrap())
        .truncate(order);
    let cmp = series_equal(&lhs, &rhs);
    assert!(cmp.is_equal(), "{cmp}");
}

#[test]
fn descending_validation() {
    let bad = DescendingSumSpec {
        family: DescendingFamily::D2_3a,
        r: 2,
        j: 0,
    };
    assert!(bad.validate().is_err());
    let bad_j = DescendingSumSpec {
        family: DescendingFamily::D2_1b,
        r: 3,
        j: 4,
    };
    assert!(bad_j.validate().is_err());
    let no_j = DescendingSumSpec {
        family: DescendingFamily::D2_1a,
        r: 3,
        j: 1,
    };
    assert!(no_j.validate().is_err());
}

#[test]
fn wang_gen_low_order_terms() {
    // variant 1 at r=2: sum over (n1, n2) with exponent
    // ½n1² + n1 n2 + n2² + n1 + n2, denominators (q;q)_{n1} (q^2;q^2)_{n2}.
    // Hand expansion to q^3: (0,0)->1; (1,0)->q^{3/2}/(1-q);
    // (2,0)->q^4/... ; (0,1)->q^2/(1-q^2); (1,1)->q^{9/2}...
    let order = fe(3, 1);
    let got = eval_wang_gen(1, 2, 0, order).unwrap();
    // 1 + q^{3/2}(1+q+q^2+...) + q^2(1+q^2+...) truncated below 3
    let mut want = PuiseuxSeries::one(order);
    for (num, den) in [(3i64, 2i64), (5, 2)] {
        want = want.add(&PuiseuxSeries::monomial(fe(num, den), rat_int(1), order).unwrap());
    }
    want = want.add(&PuiseuxSeries::monomial(fe(2, 1), rat_int(1), order).unwrap());
    let cmp = series_equal(&got, &want);
    assert!(cmp.is_equal(), "{cmp}");
    assert!(eval_wang_gen(1, 2, 1, order).is_err());
    assert!(eval_wang_gen(2, 2, 0, order).is_err());
    assert!(eval_wang_gen(3, 2, 0, order).is_err());
}

#[test]
fn numeric_matches_exact_series_sum() {
    // evaluate the exact truncation at q = e^{2 pi i tau}, tau = 1.2i, and
    // compare against the complex evaluator
    let spec = build_capparelli();
    let order = fe(30, 1);
    let series = eval_nahm(&spec, order, true).unwrap();
    let tau = Complex64::new(0.0, 1.2);
    let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau).exp();
    let mut approx = Complex64::new(0.0, 0.0);
    for (e, c) in series.terms() {
        let ef = e.to_f64();
        let cf = c.numer().to_string().parse::<f64>().unwrap()
            / c.denom().to_string().parse::<f64>().unwrap();
        approx += q.powf(ef) * cf;
    }
    let (val, tail) = eval_nahm_numeric_tau(&spec, tau, 12).unwrap();
    assert!(tail < 1e-10, "tail estimate too large: {tail}");
    assert!(
        (val - approx).norm() < 1e-10,
        "numeric {val} vs series {approx}"
    );
}

#[test]
fn spec_json_round_trip() {
    let spec = build_family(NahmFamily::T1_3, 3, 1).unwrap();
    let json = spec.to_json();
    assert_eq!(json["sign_coord"], serde_json::json!(3));
    let back = NahmSpec::from_json(&json).unwrap();
    assert_eq!(spec, back);
    let cap = build_capparelli();
    assert_eq!(NahmSpec::from_json(&cap.to_json()).unwrap(), cap);
}

#[test]
fn indefinite_spec_eval_rejected() {
    let bad = NahmSpec {
        r: 1,
        a: vec![vec![rat_int(-1)]],
        b: vec![Rat::zero()],
        c: Rat::zero(),
        d: vec![1],
        sign_coord: None,
    };
    assert!(eval_nahm(&bad, fe(10, 1), false).is_err());
}
