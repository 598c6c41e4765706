//! Randomized property tests: ring axioms, truncation coherence, Pochhammer
//! telescoping, and two-sided inverses.

use nahmforge_core::{rat, rat_int, series_equal, FracExponent, PuiseuxSeries};
use proptest::prelude::*;

const ORDER: i64 = 20;

fn fe(n: i64, d: i64) -> FracExponent {
    FracExponent::new(n, d)
}

#[derive(Debug, Clone)]
struct SparseSpec {
    d: i64,
    terms: Vec<(i64, i64, i64)>, // (key, coeff_num, coeff_den)
}

fn sparse_series_strategy(min_key_factor: i64) -> impl Strategy<Value = SparseSpec> {
    (1i64..=8)
        .prop_flat_map(move |d| {
            let key_range = (min_key_factor * d)..(ORDER * d);
            let term = (key_range, -9i64..=9, 1i64..=4);
            (Just(d), proptest::collection::vec(term, 0..8))
        })
        .prop_map(|(d, terms)| SparseSpec { d, terms })
}

fn build(spec: &SparseSpec) -> PuiseuxSeries {
    let order = fe(ORDER, 1);
    let mut acc = PuiseuxSeries::zero(order);
    for (k, n, den) in &spec.terms {
        let e = fe(*k, spec.d);
        if e < order {
            let m = PuiseuxSeries::monomial(e, rat(*n, *den), order).unwrap();
            acc = acc.add(&m);
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn add_commutative(a in sparse_series_strategy(-10), b in sparse_series_strategy(-10)) {
        let (a, b) = (build(&a), build(&b));
        prop_assert!(series_equal(&a.add(&b), &b.add(&a)).is_equal());
    }

    #[test]
    fn mul_commutative(a in sparse_series_strategy(-10), b in sparse_series_strategy(-10)) {
        let (a, b) = (build(&a), build(&b));
        prop_assert!(series_equal(&a.mul(&b), &b.mul(&a)).is_equal());
    }

    #[test]
    fn add_associative(
        a in sparse_series_strategy(-10),
        b in sparse_series_strategy(-10),
        c in sparse_series_strategy(-10),
    ) {
        let (a, b, c) = (build(&a), build(&b), build(&c));
        prop_assert!(series_equal(&a.add(&b).add(&c), &a.add(&b.add(&c))).is_equal());
    }

    #[test]
    fn mul_associative(
        a in sparse_series_strategy(0),
        b in sparse_series_strategy(0),
        c in sparse_series_strategy(0),
    ) {
        let (a, b, c) = (build(&a), build(&b), build(&c));
        prop_assert!(series_equal(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))).is_equal());
    }

    #[test]
    fn distributive(
        a in sparse_series_strategy(-10),
        b in sparse_series_strategy(-10),
        c in sparse_series_strategy(-10),
    ) {
        let (a, b, c) = (build(&a), build(&b), build(&c));
        let lhs = a.mul(&b.add(&c));
        let rhs = a.mul(&b).add(&a.mul(&c));
        prop_assert!(series_equal(&lhs, &rhs).is_equal());
    }

    #[test]
    fn truncation_coherence(
        a in sparse_series_strategy(0),
        b in sparse_series_strategy(0),
        cut in 1i64..=ORDER,
    ) {
        // truncate(mul(a,b), t) = mul(truncate(a,t), truncate(b,t)) for
        // valuation >= 0 inputs.
        let (a, b) = (build(&a), build(&b));
        let t = fe(cut, 1);
        let lhs = a.mul(&b).truncate(t);
        let rhs = a.truncate(t).mul(&b.truncate(t));
        prop_assert!(series_equal(&lhs, &rhs).is_equal());
    }

    #[test]
    fn invert_is_two_sided(a in sparse_series_strategy(0)) {
        let mut a = build(&a);
        // force invertibility: add the constant 1
        a = a.add(&PuiseuxSeries::one(fe(ORDER, 1)));
        if a.valuation().is_some() {
            let inv = a.invert().unwrap();
            let left = a.mul(&inv);
            let right = inv.mul(&a);
            let one = PuiseuxSeries::one(left.order());
            prop_assert!(series_equal(&left, &one).is_equal());
            prop_assert!(series_equal(&right, &one).is_equal());
        }
    }

    #[test]
    fn pochhammer_telescoping(
        e_num in 1i64..=4,
        e_den in 1i64..=2,
        t_num in 1i64..=3,
        t_den in 1i64..=2,
        sign in prop::sample::select(vec![1i8, -1i8]),
        n in 0u64..=10,
    ) {
        // (a;q)_n * (a q^n; q)_inf = (a;q)_inf
        let order = fe(40, 1);
        let e = fe(e_num, e_den);
        let t = fe(t_num, t_den);
        let fin = PuiseuxSeries::pochhammer_finite(e, sign, t, n, order).unwrap();
        let rest = PuiseuxSeries::pochhammer_infinite(e.add(t.mul_int(n as i64)), sign, t, order).unwrap();
        let full = PuiseuxSeries::pochhammer_infinite(e, sign, t, order).unwrap();
        prop_assert!(series_equal(&fin.mul(&rest), &full).is_equal());
    }
}

#[test]
fn neg_is_additive_inverse() {
    let order = fe(ORDER, 1);
    let a = PuiseuxSeries::pochhammer_infinite(fe(1, 1), 1, fe(1, 1), order).unwrap();
    let z = a.add(&a.neg());
    assert!(z.is_zero_series());
    assert_eq!(z.coeff(fe(0, 1)), rat_int(0));
}
